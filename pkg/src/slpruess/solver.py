"""Shooting through segment transfer matrices and bracketing eigenvalues.

The product ``T(lam) = T_{K-1}(lam) ... T_0(lam)`` propagates ``(y, y')``
from 0 to 1.  Starting from the vector that satisfies the left boundary
condition, the right boundary residual is the characteristic function whose
roots are the eigenvalues.  Roots are located by a forward scan for sign
changes followed by bisection.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .basis import Segment, constant_transfer, cossq_transfer
from .exceptions import MissedRootSuspected, ScanExhausted
from .fitting import fit_segments
from .mesh import Mesh, uniform_mesh

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundaryConditions:
    """``a0 y(0) + a1 y'(0) = 0`` and ``b0 y(1) + b1 y'(1) = 0``."""

    a0: float = 1.0
    a1: float = 0.0
    b0: float = 1.0
    b1: float = 0.0

    def __post_init__(self):
        if self.a0 == 0 and self.a1 == 0:
            raise ValueError("left boundary condition has a0 = a1 = 0")
        if self.b0 == 0 and self.b1 == 0:
            raise ValueError("right boundary condition has b0 = b1 = 0")

    @property
    def dirichlet(self) -> bool:
        return self.a1 == 0 and self.b1 == 0


DIRICHLET = BoundaryConditions()
NEUMANN = BoundaryConditions(0.0, 1.0, 0.0, 1.0)


class Problem:
    """Segments covering [0, 1] plus boundary conditions.

    Build one from a potential with :meth:`from_potential`, or pass segments
    directly to solve an exactly piecewise-model problem.
    """

    def __init__(self, segments, bc: BoundaryConditions = DIRICHLET, method: str | None = None,
                 potential=None, mesh: Mesh | None = None):
        segments = tuple(segments)
        if not segments:
            raise ValueError("a problem needs at least one segment")
        ends = np.array([s.left for s in segments] + [segments[-1].right])
        if abs(ends[0]) > 1e-12 or abs(ends[-1] - 1.0) > 1e-12:
            raise ValueError("segments must cover [0, 1]")
        rights = np.array([s.right for s in segments[:-1]])
        if np.any(np.abs(rights - ends[1:-1]) > 1e-12):
            raise ValueError("segments must be contiguous")
        if mesh is not None and mesh.K != len(segments):
            raise ValueError("mesh and segments disagree on K")
        self.segments = segments
        self.bc = bc
        self.method = method or ("extended" if any(s.extended for s in segments) else "pruess")
        self.potential = potential
        self.mesh = mesh

        self._const = np.array([not s.extended for s in segments])
        self._lengths = np.array([s.length for s in segments])
        self._alphas = np.array([s.alpha for s in segments])
        self._z = np.array([0.0 if s.z is None else s.z for s in segments])
        self._means = np.array([s.mean_value() for s in segments])
        self._mins = np.array([s.min_value() for s in segments])

    @classmethod
    def from_potential(cls, p, mesh: Mesh, method: str = "pruess", bc: BoundaryConditions = DIRICHLET):
        return cls(fit_segments(p, mesh, method), bc, method, p, mesh)

    @property
    def K(self) -> int:
        return len(self.segments)

    def transfers(self, lam: float) -> np.ndarray:
        """Stack of per-segment transfer matrices, shape ``(K, 2, 2)``."""
        out = np.empty((self.K, 2, 2))
        c = self._const
        if c.any():
            out[c] = constant_transfer(self._lengths[c], self._alphas[c], lam)
        if not c.all():
            e = ~c
            out[e] = cossq_transfer(self._lengths[e], self._alphas[e], self._z[e], lam)
        return out

    def phase_count(self, lam: float) -> float:
        """Asymptotic count ``(1/pi) sum_k l_k sqrt(max(lam - mean_k, 0))``."""
        return float(self._lengths @ np.sqrt(np.maximum(lam - self._means, 0.0))) / math.pi


def _ordered_product(mats: np.ndarray) -> np.ndarray:
    # pairwise reduction keeping the later factor on the left
    while mats.shape[0] > 1:
        n = mats.shape[0]
        paired = mats[1 : n - n % 2 : 2] @ mats[0 : n - n % 2 : 2]
        mats = np.concatenate([paired, mats[n - 1 :]]) if n % 2 else paired
    return mats[0]


def system_matrix(problem: Problem, lam: float) -> np.ndarray:
    """``T_{K-1}(lam) ... T_0(lam)``."""
    return _ordered_product(problem.transfers(lam))


def characteristic(problem: Problem, lam: float) -> float:
    """Right boundary residual of the solution satisfying the left condition.

    For Dirichlet conditions this is ``-T[0, 1]``.
    """
    bc = problem.bc
    T = system_matrix(problem, lam)
    y = T[0, 0] * bc.a1 - T[0, 1] * bc.a0
    dy = T[1, 0] * bc.a1 - T[1, 1] * bc.a0
    return float(bc.b0 * y + bc.b1 * dy)


@dataclass(frozen=True)
class EigenResult:
    index: int
    lam: float
    bracket: tuple[float, float]
    iterations: int
    method: str = ""


@dataclass
class SolverConfig:
    """Scan and bisection settings.

    ``None`` values are derived from the problem: the scan starts one unit
    below the model potential's minimum (see :func:`lower_bound`), its first
    step is ``pi^2 / 4``, and
    the ceiling is generous relative to the expected ``n``-th eigenvalue.
    """

    tol: float = 1e-10
    max_iter: int = 200
    lambda_min: float | None = None
    initial_step: float | None = None
    max_lambda: float | None = None
    gap_fraction: float = 0.25
    max_scan_steps: int = 100_000
    check_count: bool = True


def bisect(f, lo: float, hi: float, f_lo: float, tol: float, max_iter: int):
    """Bisection on a sign-change bracket; returns ``(lo, hi, iterations)``."""
    it = 0
    while it < max_iter and hi - lo > tol * max(1.0, abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        it += 1
        if fm == 0.0:
            # keep a strict bracket around an exact zero
            width = max(hi - lo, 0.0) * 1e-3
            return mid - width, mid + width, it
        if (fm > 0) == (f_lo > 0):
            lo, f_lo = mid, fm
        else:
            hi = mid
    return lo, hi, it


def find_eigenvalues(problem: Problem, n: int, config: SolverConfig | None = None) -> list[EigenResult]:
    """The ``n`` smallest eigenvalues, increasing."""
    if n < 1:
        raise ValueError("n must be >= 1")
    cfg = config or SolverConfig()
    if not cfg.tol > 0:
        raise ValueError("tolerance must be positive")

    def f(lam):
        return characteristic(problem, lam)

    lam = cfg.lambda_min if cfg.lambda_min is not None else lower_bound(problem)
    step = cfg.initial_step if cfg.initial_step is not None else math.pi**2 / 4.0
    ceiling = cfg.max_lambda
    if ceiling is None:
        ceiling = float(problem._means.max()) + 4.0 * (n + 2) ** 2 * math.pi**2

    results: list[EigenResult] = []
    f_lam = f(lam)
    steps = 0
    while len(results) < n:
        if lam >= ceiling or steps >= cfg.max_scan_steps:
            raise ScanExhausted(
                f"found {len(results)} of {n} eigenvalues below lambda={lam:.6g}"
            )
        nxt = min(lam + step, ceiling)
        f_nxt = f(nxt)
        steps += 1
        if f_lam == 0.0:
            # scan landed on a root; widen into a real bracket
            lam -= 1e-9 * max(1.0, abs(lam))
            f_lam = f(lam)
        if (f_lam > 0) != (f_nxt > 0) and f_nxt != 0.0:
            lo, hi, it = bisect(f, lam, nxt, f_lam, cfg.tol, cfg.max_iter)
            root = 0.5 * (lo + hi)
            results.append(EigenResult(len(results) + 1, root, (lo, hi), it, problem.method))
            if cfg.check_count:
                _check_count(problem, results)
            if len(results) >= 2:
                step = cfg.gap_fraction * (results[-1].lam - results[-2].lam)
            # resume the scan just past the located root
            lam, f_lam = hi, f(hi)
            continue
        lam, f_lam = nxt, f_nxt
    log.debug("%d eigenvalues after %d scan steps", n, steps)
    return results


def lower_bound(problem: Problem) -> float:
    """A value below the lowest eigenvalue: model minimum minus one, minus a Robin margin."""
    bc = problem.bc
    kappa = 0.0
    if bc.a1 != 0:
        kappa += abs(bc.a0 / bc.a1)
    if bc.b1 != 0:
        kappa += abs(bc.b0 / bc.b1)
    return float(problem._mins.min()) - 1.0 - 2.0 * (kappa + kappa * kappa)


def _check_count(problem: Problem, results: list[EigenResult]):
    found = len(results)
    estimate = round(problem.phase_count(results[-1].lam))
    if abs(estimate - found) > 1:
        raise MissedRootSuspected(
            f"root {found} at lambda={results[-1].lam:.8g} but the asymptotic count is {estimate}"
        )


def oracle_eigenvalues(p, bc: BoundaryConditions = DIRICHLET, n: int = 1, K_ref: int = 128,
                       config: SolverConfig | None = None) -> list[float]:
    """Eigenvalues from the piecewise-constant method on a fine uniform mesh."""
    if K_ref < 128:
        raise ValueError("reference solves use K_ref >= 128")
    problem = Problem.from_potential(p, uniform_mesh(K_ref), "pruess", bc)
    return [r.lam for r in find_eigenvalues(problem, n, config)]
