"""Commutation (Darboux) transformations for exactly solvable potentials.

Factoring ``L0 - mu = F- F+`` with ``F+ = D - y'/y`` for a seed solution
``y`` of ``L0 y = mu y`` and recombining as ``F+ F- + mu`` gives a new
operator ``-D^2 + p1`` with ``p1 = -p0 + 2 mu + 2 (y'/y)^2``.  Solutions of
the old equation map to solutions of the new one through ``F+``.

The module is used to generate and verify the model potential
``2/cos(x)^2`` and its elementary basis.  Repeated commutation from
``p0 = 0`` with seeds ``x``, ``x^2``, ``x^3``, ... at ``mu = 0`` yields the
family ``m (m + 1) / x^2``::

    p1 = single_commute(0.0, SeedSolution(0.0, lambda x: x, lambda x: 1.0))
    p2 = single_commute(p1, SeedSolution(0.0, lambda x: x**2, lambda x: 2 * x))
    # p2(x) == 6 / x**2
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .exceptions import PoleError

POLE_THRESHOLD = 1e-12


@dataclass(frozen=True)
class SeedSolution:
    """A solution ``y`` of ``(-D^2 + p0) y = mu y`` used to factor the operator.

    ``derivs`` optionally lists evaluators ``[y, y', y'', ...]`` for the
    determinant formula; when absent only ``y`` and ``dy`` are available.
    """

    mu: float
    y: Callable
    dy: Callable
    derivs: tuple = ()

    def log_derivative(self, x):
        yv = np.asarray(self.y(x), dtype=float)
        dyv = np.asarray(self.dy(x), dtype=float)
        scale = np.maximum(1.0, np.abs(dyv))
        if np.any(np.abs(yv) < POLE_THRESHOLD * scale):
            raise PoleError(f"seed solution (mu={self.mu}) vanishes near x={x}")
        return dyv / yv

    def derivative(self, order: int):
        if self.derivs:
            return self.derivs[order]
        return (self.y, self.dy)[order]


@dataclass(frozen=True)
class TransformedPotential:
    """Evaluator of a potential produced by commutation."""

    func: Callable
    interval: tuple[float, float] | None = None
    provenance: tuple = field(default_factory=tuple)

    def __call__(self, x):
        return self.func(x)


def _as_callable(p):
    if callable(p):
        return p
    value = float(p)
    return lambda x: np.zeros_like(np.asarray(x, dtype=float)) + value


def single_commute(p0, seed: SeedSolution, interval=None) -> TransformedPotential:
    """``p1 = -p0 + 2 mu + 2 (y'/y)^2`` for the seed ``y``.

    ``p0`` may be a number or a callable.  Evaluating the result where the
    seed vanishes raises :class:`PoleError`.
    """
    p0f = _as_callable(p0)

    def p1(x):
        g = seed.log_derivative(x)
        return -np.asarray(p0f(x), dtype=float) + 2.0 * seed.mu + 2.0 * g * g

    prov = getattr(p0, "provenance", ()) + (("single", seed.mu),)
    return TransformedPotential(p1, interval, prov)


def apply_f_plus(seed: SeedSolution, z: Callable, dz: Callable) -> Callable:
    """Return ``x -> z'(x) - (y'/y)(x) z(x)``, the image of ``z`` under ``F+``."""

    def image(x):
        return np.asarray(dz(x), dtype=float) - seed.log_derivative(x) * np.asarray(z(x), dtype=float)

    return image


def f_plus_matrix(seed: SeedSolution, p0, lam: float, x: float) -> np.ndarray:
    """Matrix ``A`` with ``(F+ z, (F+ z)') = A (z, z')`` for solutions at ``lam``.

    Its determinant is ``lam - mu``, so ``F+`` is invertible on each
    eigenspace other than the seed's.
    """
    g = float(seed.log_derivative(x))
    pv = float(_as_callable(p0)(x))
    dg = pv - seed.mu - g * g
    return np.array([[-g, 1.0], [pv - lam - dg, -g]])


def cos_sq_potential(x, mu: float = 1.0):
    """``2 mu / cos(sqrt(mu) x)^2``: single commutation of ``p0 = 0`` with seed ``cos(sqrt(mu) x)``."""
    r = math.sqrt(mu)
    return 2.0 * mu / np.cos(r * np.asarray(x, dtype=float)) ** 2


def cos_sq_derivative(x, mu: float = 1.0):
    r = math.sqrt(mu)
    t = np.tan(r * np.asarray(x, dtype=float))
    return 4.0 * mu**1.5 * t * (1.0 + t * t)


def cos_sq_second_derivative(x, mu: float = 1.0):
    r = math.sqrt(mu)
    t2 = np.tan(r * np.asarray(x, dtype=float)) ** 2
    return 4.0 * mu * mu * (1.0 + t2) * (1.0 + 3.0 * t2)


def double_commute_potential(mu1: float, mu2: float, interval=None) -> TransformedPotential:
    """Closed form of the second commutation of ``2 mu1 / cos(sqrt(mu1) x)^2``.

    The second seed is ``z2 = F+(mu1) sin(sqrt(mu2) x)``.  The factor
    ``tan(r2 x) cot(r2 x)`` is cancelled analytically so ``x = 0`` is safe.
    """
    if mu1 == mu2:
        raise ValueError("double_commute_potential requires mu1 != mu2")
    r1, r2 = math.sqrt(mu1), math.sqrt(mu2)

    def z2(x):
        return r2 * np.cos(r2 * x) + r1 * np.tan(r1 * x) * np.sin(r2 * x)

    def p2(x):
        x = np.asarray(x, dtype=float)
        zv = z2(x)
        if np.any(np.abs(zv) < POLE_THRESHOLD * max(1.0, r2)):
            raise PoleError(f"z2 vanishes on the evaluation grid (mu1={mu1}, mu2={mu2})")
        t1 = np.tan(r1 * x)
        t2 = np.tan(r2 * x)
        num = (mu1 - mu2 + mu1 * t1 * t1) * t2 + r1 * r2 * t1
        den = r2 + r1 * t1 * t2
        return -2.0 * mu1 / np.cos(r1 * x) ** 2 + 2.0 * mu2 + 2.0 * (num / den) ** 2

    return TransformedPotential(p2, interval, (("double", mu1, mu2),))


def n_commute_apply(seeds: Sequence[SeedSolution], z: Sequence[Callable], x: float) -> float:
    """Image of ``z`` under ``F+(mu_1, ..., mu_n)`` at the point ``x``.

    ``z`` lists evaluators ``[z, z', ..., z^(n)]``; each seed must supply
    derivatives up to order ``n``.  Uses the ratio of the ``(n+1)``- and
    ``n``-order Wronskian-type determinants.
    """
    n = len(seeds)
    if len(z) < n + 1:
        raise ValueError(f"z needs derivatives up to order {n}")
    cols = [[float(seed.derivative(k)(x)) for k in range(n + 1)] for seed in seeds]
    small = np.array([[cols[j][k] for j in range(n)] for k in range(n)])
    denom = np.linalg.det(small)
    if abs(denom) < POLE_THRESHOLD:
        raise PoleError(f"seed Wronskian vanishes at x={x}")
    big = np.array([[float(z[k](x))] + [cols[j][k] for j in range(n)] for k in range(n + 1)])
    return (-1) ** n * np.linalg.det(big) / denom


def bessel_basis(lam: float, x: float) -> tuple[float, float]:
    """Elementary solutions of ``-y'' + 2/x^2 y = lam y`` for ``lam > 0``."""
    if x == 0:
        raise PoleError("bessel_basis is singular at x = 0")
    k = math.sqrt(lam)
    kx = k * x
    return math.sin(kx) + math.cos(kx) / kx, math.cos(kx) - math.sin(kx) / kx
