"""Acceptance gate.

Each test checks one acceptance criterion at its stated tolerance and
prints a single ``PASS``/``FAIL`` line, even when output capture is on.
Run with ``pytest tests/test_acceptance.py -v``.
"""

import math
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from conftest import PUBLISHED_INDICES, PUBLISHED_TABLES, fd_residual, rk4_propagator
from slpruess.basis import Segment, extended_basis
from slpruess.cli import RunConfig, build, run
from slpruess.commutation import bessel_basis, double_commute_potential
from slpruess.fitting import build_slope_table, fit_segments, lookup_z, model_l2_distance
from slpruess.mesh import adaptive_mesh, mesh_penalties, uniform_mesh
from slpruess.potentials import builtin
from slpruess.solver import (
    Problem,
    characteristic,
    find_eigenvalues,
    lower_bound,
    oracle_eigenvalues,
    system_matrix,
)

CASES = (1, 2, 3, 4, 5)


@pytest.fixture
def report(capsys):
    def emit(number, title, failures, detail=""):
        status = "PASS" if not failures else "FAIL"
        with capsys.disabled():
            print(f"\ncriterion {number:2d} [{status}] {title}" + (f": {detail}" if detail else ""))
            for line in failures:
                print(f"    {line}")
        assert not failures, f"criterion {number} failed: {failures}"

    return emit


def rel(a, b):
    return abs(a - b) / abs(b)


def table_row(case, method, K):
    rows = run(RunConfig(case=str(case), method=method, K=K, num_eigen=25))
    lams = [r[4] for r in rows]
    return [lams[i - 1] for i in PUBLISHED_INDICES]


def row_failures(case, label, got, tol):
    out = []
    for i, g, printed in zip(PUBLISHED_INDICES, got, PUBLISHED_TABLES[case][label]):
        if rel(g, printed) > tol:
            out.append(f"case {case} {label} lambda_{i}: got {g:.6g}, printed {printed:.5g}, rel {rel(g, printed):.2e}")
    return out


def test_criterion_01_uniform_pruess_128(report):
    failures, slowest = [], 0.0
    for case in CASES:
        start = time.perf_counter()
        got = table_row(case, "up", 128)
        elapsed = time.perf_counter() - start
        slowest = max(slowest, elapsed)
        failures += row_failures(case, "U-P128", got, 5e-4)
        if elapsed > 10.0:
            failures.append(f"case {case} took {elapsed:.1f} s")
    report(1, "U-P128 rows within 5e-4, <= 10 s per case", failures, f"slowest case {slowest:.2f} s")


def test_criterion_02_uniform_16(report):
    failures = []
    for case in CASES:
        for method, label in (("up", "U-P16"), ("ux", "U-X16")):
            failures += row_failures(case, label, table_row(case, method, 16), 1e-3)
    report(2, "U-P16 and U-X16 rows within 1e-3", failures)


def test_criterion_03_adaptive_16(report):
    failures, fallbacks = [], []
    for case in CASES:
        p = builtin(case)
        for method, label, kind in (("ap", "A-P16", "constant"), ("ax", "A-X16", "linear")):
            misses = row_failures(case, label, table_row(case, method, 16), 2e-3)
            if not misses:
                continue
            adaptive = mesh_penalties(p, adaptive_mesh(p, 16, kind), kind).sum()
            uniform = mesh_penalties(p, uniform_mesh(16), kind).sum()
            if adaptive < uniform:
                fallbacks.append(f"case {case} {label} (penalty {adaptive:.3e} < uniform {uniform:.3e})")
            else:
                failures += misses + [f"case {case} {label} penalty {adaptive:.3e} >= uniform {uniform:.3e}"]
    detail = "outside band but beating uniform penalty: " + "; ".join(fallbacks) if fallbacks else ""
    report(3, "A-P16 and A-X16 rows within 2e-3 or penalty below uniform", failures, detail)


def test_criterion_04_free_spectrum(report):
    problem = Problem.from_potential(lambda x: 0.0 * np.asarray(x), uniform_mesh(1), "pruess")
    failures = []
    for r in find_eigenvalues(problem, 25):
        exact = (r.index * math.pi) ** 2
        if rel(r.lam, exact) > 1e-8:
            failures.append(f"n={r.index}: {r.lam!r} vs {exact!r}")
    report(4, "p = 0, K = 1 gives n^2 pi^2 to 1e-8 for n <= 25", failures)


def _shooting_eigenvalues(p, approx, steps=2000):
    def shoot(lam):
        return rk4_propagator(p, 0.0, 1.0, lam, steps)[0, 1]

    return [brentq(shoot, a - 0.5, a + 0.5, xtol=1e-13, rtol=1e-15) for a in approx]


def test_criterion_05_exact_on_model_potentials(report):
    models = [("constant 7.3", Segment(0.0, 1.0, 7.3), "pruess")]
    for case in (2, 3, 4, 5):
        seg = fit_segments(builtin(case), uniform_mesh(1), "extended")[0]
        models.append((f"fitted model of case {case} (z={seg.z:.4f})", seg, "extended"))
    models.append(("alpha=-3, z=0.9", Segment(0.0, 1.0, -3.0, 0.9), "extended"))
    failures, worst = [], 0.0
    for name, seg, method in models:
        problem = Problem([seg], method=method)
        got = [r.lam for r in find_eigenvalues(problem, 5)]
        ref = _shooting_eigenvalues(seg.model_value, got)
        for i, (g, e) in enumerate(zip(got, ref), 1):
            worst = max(worst, rel(g, e))
            if rel(g, e) > 1e-7:
                failures.append(f"{name} lambda_{i}: {g!r} vs RK4 {e!r}")
    report(5, "single-model potentials match RK4 to 1e-7", failures, f"worst rel {worst:.1e}")


def test_criterion_06_convergence_order(report):
    failures, summary = [], []
    for case in (2, 3, 4, 5):
        p = builtin(case)
        ref = oracle_eigenvalues(p, n=1, K_ref=4096)[0]
        errs = [abs(find_eigenvalues(Problem.from_potential(p, uniform_mesh(K)), 1)[0].lam - ref)
                for K in (16, 32, 64, 128)]
        ratios = [a / b for a, b in zip(errs, errs[1:])]
        summary.append(f"case {case} " + "/".join(f"{r:.2f}" for r in ratios))
        if not all(3.0 <= r <= 5.0 for r in ratios):
            failures.append(f"case {case} ratios {[round(r, 3) for r in ratios]}, errors {[f'{e:.2e}' for e in errs]}")
    report(6, "lambda_1 error ratio in [3, 5] per doubling, K = 16..128", failures, "; ".join(summary))


def test_criterion_07_structural_invariants(report):
    rng = np.random.default_rng(7)
    problems, failures = {}, []
    for case in CASES:
        for method in ("up", "ux", "ap", "ax"):
            _, _, problem = build(RunConfig(case=str(case), method=method, K=16))
            results = find_eigenvalues(problem, 25)
            lams = [r.lam for r in results]
            if not all(b > a for a, b in zip(lams, lams[1:])):
                failures.append(f"case {case} {method} spectrum not strictly increasing")
            for r in results:
                lo, hi = r.bracket
                if not (lo <= r.lam <= hi and characteristic(problem, lo) * characteristic(problem, hi) <= 0):
                    failures.append(f"case {case} {method} lambda_{r.index} not bracketed")
            problems[(case, method)] = (problem, lower_bound(problem), lams[-1])
    keys = list(problems)
    worst = 0.0
    for _ in range(1000):
        problem, lo, hi = problems[keys[rng.integers(len(keys))]]
        lam = rng.uniform(lo, hi)
        dev = abs(np.linalg.det(system_matrix(problem, lam)) - 1.0)
        worst = max(worst, dev)
        if dev > 1e-9:
            failures.append(f"det deviation {dev:.2e} at lambda={lam:.6g}")
    report(7, "det T = 1 (1000 draws), bracketed and increasing spectra", failures, f"worst |det - 1| {worst:.1e}")


def test_criterion_08_commutation(report):
    rng = np.random.default_rng(8)
    failures, worst = [], 0.0
    q = lambda x: 2.0 / math.cos(x) ** 2
    for _ in range(100):
        x, sigma = rng.uniform(-1.3, 1.3), rng.uniform(-20.0, 60.0)
        for col in (0, 1):
            res = fd_residual(lambda t: extended_basis(t, sigma)[0, col], x, q, sigma, h=1e-3)
            worst = max(worst, res)
            if res >= 1e-6:
                failures.append(f"Y{col + 1} residual {res:.2e} at x={x:.4f}, sigma={sigma:.4f}")
    inv_sq = lambda x: 2.0 / x**2
    for _ in range(100):
        lam, x = rng.uniform(0.5, 60.0), rng.uniform(0.3, 2.0)
        for col in (0, 1):
            res = fd_residual(lambda t: bessel_basis(lam, t)[col], x, inv_sq, lam, h=1e-3)
            worst = max(worst, res)
            if res >= 1e-6:
                failures.append(f"Bessel basis {col + 1} residual {res:.2e} at x={x:.4f}, lambda={lam:.4f}")
    x = np.linspace(0.0, 0.5, 101)
    r2 = math.sqrt(2.0)
    z2 = r2 * np.cos(r2 * x) + np.tan(x) * np.sin(r2 * x)
    dz2 = -2.0 * np.sin(r2 * x) + np.sin(r2 * x) / np.cos(x) ** 2 + r2 * np.tan(x) * np.cos(r2 * x)
    recursive = -2.0 / np.cos(x) ** 2 + 4.0 + 2.0 * (dz2 / z2) ** 2
    gap = np.abs(double_commute_potential(1.0, 2.0)(x) - recursive).max()
    if gap > 1e-9:
        failures.append(f"double commutation differs from recursion by {gap:.2e}")
    report(8, "basis residuals < 1e-6, double commutation matches recursion to 1e-9", failures,
           f"worst residual {worst:.1e}, double commutation gap {gap:.1e}")


def test_criterion_09_slope_table(report):
    table = build_slope_table()
    failures = []
    if table.u.size != 201:
        failures.append(f"{table.u.size} nodes")
    qprime = 4 * np.sin(table.t) / np.cos(table.t) ** 3
    dev = np.abs(qprime - table.u**3) / np.maximum(1.0, np.abs(table.u) ** 3)
    if dev.max() > 1e-10:
        failures.append(f"max node deviation {dev.max():.2e}")
    if lookup_z(8.0) != math.pi / 4:
        failures.append(f"lookup_z(8) = {lookup_z(8.0)!r}")
    report(9, "201 nodes with q'(t) = u^3 to 1e-10, lookup_z(8) = pi/4", failures, f"max deviation {dev.max():.1e}")


def test_criterion_10_approximation_quality(report):
    failures, summary = [], []
    for case in CASES:
        p = builtin(case)
        _, _, ax = build(RunConfig(case=str(case), method="ax", K=16))
        _, _, up = build(RunConfig(case=str(case), method="up", K=16))
        d_ax = model_l2_distance(p, ax.segments)
        d_up = model_l2_distance(p, up.segments)
        summary.append(f"case {case} {d_ax:.3g} vs {d_up:.3g}")
        if d_ax > d_up:
            failures.append(f"case {case}: A-X L2 {d_ax:.4g} > U-P L2 {d_up:.4g}")
    report(10, "A-X16 L2 distance <= U-P16 L2 distance", failures, "; ".join(summary))
