"""The five benchmark potentials and tabulated user potentials on [0, 1]."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

CASE3_GUARD = 1e-6


@dataclass(frozen=True)
class PotentialSpec:
    """A named potential ``p(x)``; calling it evaluates ``p`` (array-friendly)."""

    id: str
    func: Callable
    formula: str
    samples: tuple | None = None

    def __call__(self, x):
        return self.func(x)


def _case1(x):
    x = np.asarray(x, dtype=float)
    return math.pi**2 / (math.pi * x + 0.1) ** 2


def _case2(x):
    t = np.asarray(x, dtype=float) - 0.5
    pt = math.pi * t
    return 1 + np.cos(pt) + 5 * np.cos(2 * pt) - 2 * np.cos(3 * pt) - 3 * np.cos(4 * pt)


def _case3(x):
    x = np.asarray(x, dtype=float)
    safe = np.maximum(x, CASE3_GUARD)
    return np.where(x >= CASE3_GUARD, safe * np.sin(1.0 / safe), 0.0)


def _case4(x):
    return 1.0 / np.cos(np.asarray(x, dtype=float)) ** 2


def _case5(x):
    x = np.asarray(x, dtype=float)
    return 1.0 / (0.2 + np.sqrt(np.maximum(x * (1.0 - x), 0.0)))


_BUILTINS = {
    1: (_case1, "pi^2 / (pi x + 0.1)^2"),
    2: (_case2, "1 + cos(pi t) + 5 cos(2 pi t) - 2 cos(3 pi t) - 3 cos(4 pi t), t = x - 0.5"),
    3: (_case3, "x sin(1/x) for x >= 1e-6, else 0"),
    4: (_case4, "1 / cos(x)^2"),
    5: (_case5, "1 / (0.2 + sqrt(x (1 - x)))"),
}


def builtin(case_id) -> PotentialSpec:
    """Benchmark potential by number (1-5) or name ('case1'...'case5')."""
    key = case_id
    if isinstance(key, str):
        key = key.lower().removeprefix("case")
    try:
        key = int(key)
        func, formula = _BUILTINS[key]
    except (ValueError, KeyError):
        raise ValueError(f"unknown benchmark potential {case_id!r}; expected 1-5") from None
    return PotentialSpec(f"case{key}", func, formula)


def from_table(samples, id: str = "table") -> PotentialSpec:
    """Piecewise-linear potential through ``(x, p)`` samples covering [0, 1]."""
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2 or arr.shape[0] < 2:
        raise ValueError("samples must be a sequence of at least two (x, p) pairs")
    xs, ps = arr[:, 0], arr[:, 1]
    if np.any(np.diff(xs) <= 0):
        raise ValueError("sample abscissae must be strictly increasing")
    if xs[0] > 0.0 or xs[-1] < 1.0:
        raise ValueError(f"samples cover [{xs[0]}, {xs[-1]}], need [0, 1]")
    if not np.all(np.isfinite(ps)):
        raise ValueError("sample values must be finite")

    def func(x):
        return np.interp(np.asarray(x, dtype=float), xs, ps)

    return PotentialSpec(id, func, "piecewise-linear table", tuple(map(tuple, arr)))


def read_table(path) -> PotentialSpec:
    """Load a two-column CSV ``x,p``; a non-numeric first row is treated as a header."""
    rows = []
    with open(path, newline="") as fh:
        for i, row in enumerate(csv.reader(fh)):
            cells = [c.strip() for c in row if c.strip()]
            if not cells:
                continue
            try:
                x, p = (float(c) for c in cells[:2])
            except ValueError:
                if i == 0:
                    continue
                raise ValueError(f"{path}: bad row {i + 1}: {row}") from None
            rows.append((x, p))
    return from_table(rows, id=Path(path).stem)
