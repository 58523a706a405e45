"""Closed-form transfer matrices for the two segment models.

A segment carries either the constant model ``alpha`` or the shifted model
``alpha + 2 / cos(x - m + z)**2``.  Both admit elementary fundamental
solutions, so the 2x2 propagator of ``(y, y')`` across a segment is exact
for the model potential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import PoleError
from .special_fn import phase_c, phase_s

HALF_PI = 0.5 * math.pi

# |sigma - 1| below this uses the blended limit for Y2, Y2'
SIGMA_ONE_BAND = 1e-3
_BAND_NODES = tuple(SIGMA_ONE_BAND * k for k in (-1.0, -0.5, 0.0, 0.5, 1.0))


def _lagrange_weight(node, s):
    w = np.ones_like(s)
    for other in _BAND_NODES:
        if other != node:
            w = w * (s - other) / (node - other)
    return w


@dataclass(frozen=True)
class Segment:
    """One subinterval ``[left, left + length]`` with its fitted model.

    ``z is None`` selects the constant model ``alpha``; otherwise the model is
    ``alpha + 2 / cos(x - midpoint + z)**2``.
    """

    left: float
    length: float
    alpha: float
    z: float | None = None

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"segment length must be positive, got {self.length}")
        if self.z is not None and abs(self.z) + 0.5 * self.length >= HALF_PI:
            raise PoleError(
                f"shifted model z={self.z} with length {self.length} reaches a pole of tan"
            )

    @property
    def right(self) -> float:
        return self.left + self.length

    @property
    def midpoint(self) -> float:
        return self.left + 0.5 * self.length

    @property
    def extended(self) -> bool:
        return self.z is not None

    def model_value(self, x):
        """Model potential at ``x`` (array-friendly)."""
        x = np.asarray(x, dtype=float)
        if self.z is None:
            return np.full_like(x, self.alpha)
        return self.alpha + 2.0 / np.cos(x - self.midpoint + self.z) ** 2

    def min_value(self) -> float:
        """Minimum of the model potential over the segment."""
        if self.z is None:
            return self.alpha
        h = 0.5 * self.length
        u = min(max(0.0, self.z - h), self.z + h)
        return self.alpha + 2.0 / math.cos(u) ** 2

    def mean_value(self) -> float:
        """Average of the model potential over the segment."""
        if self.z is None:
            return self.alpha
        h = 0.5 * self.length
        return self.alpha + 2.0 * (math.tan(self.z + h) - math.tan(self.z - h)) / self.length


def constant_transfer(l, alpha, lam):
    """Propagator for ``-y'' + alpha y = lam y`` over a length ``l``.

    Broadcasts over array inputs; the result has shape ``(..., 2, 2)``.
    """
    l = np.asarray(l, dtype=float)
    k2 = np.asarray(lam, dtype=float) - np.asarray(alpha, dtype=float)
    w = k2 * l * l
    c = phase_c(w)
    s = l * phase_s(w)
    return np.stack(
        [np.stack([c, s], axis=-1), np.stack([-k2 * s, c], axis=-1)], axis=-2
    )


def _cossq_generic(x, sigma):
    c = phase_c(sigma * x * x)
    s = x * phase_s(sigma * x * x)
    t = np.tan(x)
    sec2 = 1.0 + t * t
    y1 = c + t * s
    dy1 = t * c + (sec2 - sigma) * s
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / (1.0 - sigma)
        y2 = (t * c - sigma * s) * inv
        dy2 = ((sec2 - sigma) * c - sigma * t * s) * inv
    return y1, y2, dy1, dy2


def _cossq_limit(x):
    """Y2 and Y2' at sigma = 1, where the generic formula is 0/0."""
    t = np.tan(x)
    sn = np.sin(x)
    cs = np.cos(x)
    y2 = 0.5 * (x * t * sn + sn + x * cs)
    dy2 = cs + 0.5 * (t * sn + x * sn + x * t * t * sn)
    return y2, dy2


def extended_basis(x, sigma):
    """Fundamental matrix ``[[Y1, Y2], [Y1', Y2']]`` of ``-y'' + 2/cos(x)^2 y = sigma y``.

    The basis is normalized to the identity at ``x = 0``.  Inputs broadcast;
    ``|x|`` must stay below ``pi/2``.
    """
    x, sigma = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(sigma, dtype=float))
    shape = x.shape
    x, sigma = x.reshape(-1), sigma.reshape(-1)
    if np.any(np.abs(x) >= HALF_PI):
        raise PoleError("extended_basis requires |x| < pi/2")
    y1, y2, dy1, dy2 = _cossq_generic(x, sigma)

    d = sigma - 1.0
    near = np.abs(d) < SIGMA_ONE_BAND
    if np.any(near):
        # degree-4 interpolation in sigma: generic formula off-centre, exact limit at 1
        xb = x[near]
        db = d[near]
        y2b = np.zeros_like(xb)
        dy2b = np.zeros_like(xb)
        for node in _BAND_NODES:
            if node == 0.0:
                v2, vd2 = _cossq_limit(xb)
            else:
                _, v2, _, vd2 = _cossq_generic(xb, 1.0 + node)
            w = _lagrange_weight(node, db)
            y2b += w * v2
            dy2b += w * vd2
        y2[near] = y2b
        dy2[near] = dy2b

    out = np.stack([np.stack([y1, y2], axis=-1), np.stack([dy1, dy2], axis=-1)], axis=-2)
    return out.reshape(shape + (2, 2))


def adjugate(m):
    """2x2 adjugate; equals the inverse for unimodular matrices."""
    out = np.empty_like(m)
    out[..., 0, 0] = m[..., 1, 1]
    out[..., 0, 1] = -m[..., 0, 1]
    out[..., 1, 0] = -m[..., 1, 0]
    out[..., 1, 1] = m[..., 0, 0]
    return out


def commutation_map(x, sigma):
    """``A(x)`` with ``(F+ phi, (F+ phi)') = A (phi, phi')``, ``F+ = D + tan(x)``.

    Here ``phi`` solves the free equation ``-phi'' = sigma phi``; ``det A = sigma - 1``.
    """
    t = np.tan(x)
    sec2 = 1.0 + t * t
    return np.stack(
        [np.stack([t, np.ones_like(t)], axis=-1), np.stack([sec2 - sigma, t], axis=-1)], axis=-2
    )


def cossq_transfer(l, alpha, z, lam):
    """Propagator across a shifted-model segment of length ``l`` (broadcasts).

    For ``sigma >= 0`` this is ``B(z + l/2) adj(B(z - l/2))`` with ``B`` the
    normalized basis.  For ``sigma < 0`` that basis grows like
    ``exp(sqrt(-sigma) |x|)`` and the product cancels catastrophically, so the
    same matrix is formed as ``A(b) P(l) adj(A(a)) / (sigma - 1)`` with ``P``
    the free propagator over the segment.
    """
    l, z, sigma = np.broadcast_arrays(
        np.asarray(l, dtype=float),
        np.asarray(z, dtype=float),
        np.asarray(lam, dtype=float) - np.asarray(alpha, dtype=float),
    )
    a = z - 0.5 * l
    b = z + 0.5 * l
    out = np.empty(l.shape + (2, 2))
    pos = sigma >= 0.0
    if np.any(pos):
        out[pos] = extended_basis(b[pos], sigma[pos]) @ adjugate(extended_basis(a[pos], sigma[pos]))
    neg = ~pos
    if np.any(neg):
        if np.any(np.maximum(np.abs(a[neg]), np.abs(b[neg])) >= HALF_PI):
            raise PoleError("shifted model reaches a pole of tan")
        sn = sigma[neg]
        free = constant_transfer(l[neg], 0.0, sn)
        prod = commutation_map(b[neg], sn) @ free @ adjugate(commutation_map(a[neg], sn))
        out[neg] = prod / (sn - 1.0)[..., None, None]
    return out


def model_transfer(seg: Segment, lam: float) -> np.ndarray:
    """Transfer matrix of ``seg`` at eigenparameter ``lam``."""
    if seg.z is None:
        return constant_transfer(seg.length, seg.alpha, lam)
    return cossq_transfer(seg.length, seg.alpha, seg.z, lam)
