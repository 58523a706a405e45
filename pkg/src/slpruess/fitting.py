"""Fit segment models to a potential on a given mesh.

Pruess segments take the midpoint value.  Extended segments use the shifted
``2/cos^2`` model: its shift ``z`` matches the slope of the model to the
secant slope of ``p`` over the segment (through a precomputed table), and
``alpha`` makes the model integral equal the midpoint-rule integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .basis import HALF_PI, Segment
from .mesh import Mesh

METHODS = ("pruess", "extended")
TABLE_SIZE = 201
TABLE_U_MAX = 10.0
POLE_MARGIN = 1e-6


@dataclass(frozen=True)
class SlopeTable:
    """Nodes ``u_j`` (uniform in the cube root of the slope) and ``t_j`` with ``q'(t_j) = u_j^3``."""

    u: np.ndarray
    t: np.ndarray

    @property
    def slopes(self) -> np.ndarray:
        s = np.tan(self.t)
        return 4.0 * s * (1.0 + s * s)


def _solve_tan(u):
    """Real root ``s`` of ``4 s^3 + 4 s = u^3`` (Cardano, then Newton polish)."""
    half_q = u**3 / 8.0
    disc = np.sqrt(half_q * half_q + 1.0 / 27.0)
    # second cube root rewritten as -1/(3 * first) to avoid cancellation
    a = np.cbrt(np.abs(half_q) + disc)
    s = np.sign(half_q) * (a - 1.0 / (3.0 * a))
    for _ in range(3):
        s = s - (4 * s**3 + 4 * s - u**3) / (12 * s * s + 4)
    return s


@lru_cache(maxsize=1)
def build_slope_table() -> SlopeTable:
    u = (np.arange(TABLE_SIZE) - TABLE_SIZE // 2) * (2 * TABLE_U_MAX / (TABLE_SIZE - 1))
    t = np.arctan(_solve_tan(u))
    u.flags.writeable = False
    t.flags.writeable = False
    return SlopeTable(u, t)


def lookup_z(slope, table: SlopeTable | None = None):
    """Shift ``z`` whose model slope ``q'(z)`` approximates ``slope``.

    Interpolates linearly in the cube root of the slope; slopes beyond the
    table range clamp to the end nodes.
    """
    table = table or build_slope_table()
    out = np.interp(np.cbrt(np.asarray(slope, dtype=float)), table.u, table.t)
    return float(out) if np.ndim(out) == 0 else out


def fit_segments(p, mesh: Mesh, method: str = "pruess", table: SlopeTable | None = None) -> list[Segment]:
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    x = mesh.points
    lengths = mesh.lengths
    mids = mesh.midpoints
    pm = np.asarray(p(mids), dtype=float)
    if method == "pruess":
        return [Segment(float(a), float(l), float(v)) for a, l, v in zip(x[:-1], lengths, pm)]

    px = np.asarray(p(x), dtype=float)
    secant = np.diff(px) / lengths
    z = np.asarray(lookup_z(secant, table), dtype=float).reshape(-1)
    limit = HALF_PI - 0.5 * lengths - POLE_MARGIN
    z = np.where(np.abs(z) > limit, np.sign(z) * limit, z)
    alpha = pm - 2.0 * (np.tan(z + 0.5 * lengths) - np.tan(z - 0.5 * lengths)) / lengths
    return [
        Segment(float(a), float(l), float(al), float(zz))
        for a, l, al, zz in zip(x[:-1], lengths, alpha, z)
    ]


def model_on_grid(segments, x) -> np.ndarray:
    """Evaluate the piecewise model potential at points ``x`` in [0, 1]."""
    x = np.asarray(x, dtype=float)
    lefts = np.array([s.left for s in segments])
    idx = np.clip(np.searchsorted(lefts, x, side="right") - 1, 0, len(segments) - 1)
    out = np.empty_like(x)
    for k, seg in enumerate(segments):
        sel = idx == k
        if np.any(sel):
            out[sel] = seg.model_value(x[sel])
    return out


def model_l2_distance(p, segments, samples: int = 64) -> float:
    """L2 distance between ``p`` and the fitted model, by per-segment Simpson."""
    total = 0.0
    for seg in segments:
        xs = np.linspace(seg.left, seg.right, 2 * samples + 1)
        err = np.asarray(p(xs), dtype=float) - seg.model_value(xs)
        w = np.ones(xs.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        total += float((err * err) @ w) * seg.length / (6.0 * samples)
    return math.sqrt(total)
