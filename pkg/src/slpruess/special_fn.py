"""Entire-function kernels behind every closed-form basis in the package.

``phase_c(w)`` and ``phase_s(w)`` are the analytic continuations of
``cos(sqrt(w))`` and ``sin(sqrt(w)) / sqrt(w)`` to all real ``w``.  With
``w = (lam - alpha) * l**2`` the piecewise-constant propagator needs no
branching on the sign of ``lam - alpha``.
"""

from __future__ import annotations

import math

import numpy as np

SERIES_SWITCH = 1e-4
_SERIES_TERMS = 6

# Taylor coefficients (-1)^k / (2k)! and (-1)^k / (2k+1)!
_C_COEF = np.array([(-1) ** k / math.factorial(2 * k) for k in range(_SERIES_TERMS)])
_S_COEF = np.array([(-1) ** k / math.factorial(2 * k + 1) for k in range(_SERIES_TERMS)])


def _horner(coef, w):
    acc = np.zeros_like(w)
    for c in coef[::-1]:
        acc = acc * w + c
    return acc


def _finish(out, scalar):
    return float(out) if scalar else out


def phase_c(w):
    """cos(sqrt(w)) for w >= 0, cosh(sqrt(-w)) for w < 0."""
    scalar = np.ndim(w) == 0
    w = np.asarray(w, dtype=float)
    root = np.sqrt(np.abs(w))
    with np.errstate(over="ignore"):
        out = np.where(w >= 0.0, np.cos(root), np.cosh(root))
    small = np.abs(w) <= SERIES_SWITCH
    if np.any(small):
        out = np.where(small, _horner(_C_COEF, np.where(small, w, 0.0)), out)
    return _finish(out, scalar)


def phase_s(w):
    """sin(sqrt(w))/sqrt(w) for w > 0, its limit 1 at 0, sinh(sqrt(-w))/sqrt(-w) for w < 0."""
    scalar = np.ndim(w) == 0
    w = np.asarray(w, dtype=float)
    small = np.abs(w) <= SERIES_SWITCH
    root = np.sqrt(np.where(small, 1.0, np.abs(w)))
    with np.errstate(over="ignore", invalid="ignore"):
        out = np.where(w >= 0.0, np.sin(root), np.sinh(root)) / root
    if np.any(small):
        out = np.where(small, _horner(_S_COEF, np.where(small, w, 0.0)), out)
    return _finish(out, scalar)
