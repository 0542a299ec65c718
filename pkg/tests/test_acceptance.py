"""Exit criteria on the reference configuration.

Reference: 3D grid, box side 1.0, 6 cells per axis (216 nodes), Gaussian
kernel with amplitude 1 and width 0.5, modes (1, 2, 3).  Each test prints a
single PASS/FAIL line; the lines are repeated in the terminal summary.
"""

import time

import numpy as np
import pytest

from complementarity import (
    Field,
    Kernel,
    assemble_operator,
    build_grid,
    build_quartet,
    eigendecompose,
    is_neutral,
    project_neutral,
    quartet_interactions,
    scaling_study,
    search_parameters,
    total_charge,
)
from complementarity.cli import main
from complementarity.outputs import Lcg64, random_field
from complementarity.spectral import oracle_discrepancy

RESULTS = []

REFERENCE_CONFIG = """\
kernel.family = gaussian
kernel.amplitude = 1
kernel.width = 0.5
grid.dimension = 3
grid.box_side = 1.0
grid.cells_per_axis = 6
"""
ALPHA_GRID = [round(0.05 * n, 2) for n in range(1, 11)]


def record(n, ok, detail):
    line = f"[criterion {n}] {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS.append(line)
    print(line)
    return ok


@pytest.fixture(scope="module")
def kernel():
    return Kernel("gaussian", 1.0, 0.5)


@pytest.fixture(scope="module")
def grid():
    return build_grid(3, 1.0, 6, 1.0)


@pytest.fixture(scope="module")
def operator(grid, kernel):
    return assemble_operator(grid, kernel)


@pytest.fixture(scope="module")
def witness_search(kernel, grid):
    t0 = time.perf_counter()
    res = search_parameters(kernel, grid, range(1, 6), ALPHA_GRID, [0.5, 0.3, 0.2])
    return res, time.perf_counter() - t0


def test_1_negative_spectrum(grid, kernel):
    t0 = time.perf_counter()
    M = assemble_operator(grid, kernel)
    dec = eigendecompose(M)
    elapsed = time.perf_counter() - t0
    lam = dec.eigenvalues
    residual = float(np.max(dec.residuals(M)))
    ortho = dec.orthonormality_error()
    ok = (len(lam) == 216 and bool(np.all(lam < 0)) and residual <= 1e-8 * abs(lam[0])
          and ortho <= 1e-10 and elapsed < 10)
    record(1, ok, f"{int(np.sum(lam < 0))}/216 negative, max residual {residual:.2e} "
                  f"(limit {1e-8 * abs(lam[0]):.2e}), orthonormality {ortho:.2e}, {elapsed:.2f}s")
    assert ok


def test_2_oracle_equivalence(operator):
    dec = eigendecompose(operator)
    rng = Lcg64(1)
    worst = 0.0
    for _ in range(10):
        f = random_field(operator.grid, rng)
        g = random_field(operator.grid, rng)
        worst = max(worst, oracle_discrepancy(operator, dec, f, g)[2])
    ok = worst <= 1e-8
    record(2, ok, f"max relative discrepancy {worst:.2e} over 10 seeded pairs (limit 1e-8)")
    assert ok


def test_3_neutrality(operator):
    dec = eigendecompose(operator, 8)
    worst_charge = 0.0
    all_neutral = True
    for ijk, alpha in [((1, 2, 3), 0.05), ((2, 3, 4), 0.5), ((1, 8, 2), 0.3), ((5, 8, 1), 0.9)]:
        q = build_quartet(dec, *ijk, alpha)
        for f in q.fields:
            scaled = abs(total_charge(f)) / max(1.0, f.norm() * np.sqrt(f.grid.measure))
            worst_charge = max(worst_charge, scaled)
            all_neutral &= is_neutral(f, 1e-10)
    rng = np.random.default_rng(3)
    idem = 0.0
    for _ in range(20):
        f = Field(operator.grid, rng.normal(size=216) + 5.0)
        p = project_neutral(f)
        idem = max(idem, float(np.max(np.abs(project_neutral(p).values - p.values))) / max(1.0, f.norm()))
    const = float(np.max(np.abs(project_neutral(operator.grid.constant(3.7)).values)))
    ok = all_neutral and worst_charge <= 1e-10 and idem <= 1e-12 and const <= 1e-14
    record(3, ok, f"scaled quartet charge {worst_charge:.2e}, idempotence {idem:.2e}, Pr(const) {const:.2e}")
    assert ok


def test_4_expansion_identity(operator):
    dec = eigendecompose(operator, 10)
    settings = [((1, 2, 3), 0.05), ((1, 2, 3), 0.5), ((2, 3, 4), 0.5),
                ((1, 8, 2), 0.3), ((5, 8, 1), 0.9), ((8, 9, 10), 0.15)]
    worst = 0.0
    for ijk, alpha in settings:
        rep = quartet_interactions(operator, dec, build_quartet(dec, *ijk, alpha))
        worst = max(worst, rep.max_discrepancy)
    ok = worst <= 1e-10 and len(settings) >= 5
    record(4, ok, f"max direct-vs-expansion discrepancy {worst:.2e} over {len(settings)} settings (limit 1e-10)")
    assert ok


def test_5_f_scaling(kernel, grid):
    t0 = time.perf_counter()
    study = scaling_study(kernel, grid, [1.0, 0.5, 0.25, 0.125], (1, 2, 3))
    elapsed = time.perf_counter() - t0
    slope, spread = study.slope, study.c_spread
    ok = slope is not None and slope >= 0.9 and spread <= 3.0 and elapsed < 60 and not study.partial
    record(5, ok, f"log-log slope {slope:.4f} (need >= 0.9), c_ratio max/median {spread:.3f} (need <= 3), "
                  f"{elapsed:.2f}s")
    assert ok


def test_6_witness_existence(witness_search, tmp_path):
    res, elapsed = witness_search
    best = res.best
    floor_ok = False
    if best is not None:
        M = assemble_operator(build_grid(3, 1.0, 6, best.scale), Kernel("gaussian", 1.0, 0.5))
        lam1 = eigendecompose(M, 1).eigenvalue(1)
        floor_ok = best.report.worst_margin > 1e-8 * abs(lam1)
    exit_code = None
    if res.found:
        cfg = tmp_path / "witness.conf"
        cfg.write_text(REFERENCE_CONFIG + f"grid.scale = {best.scale!r}\nmodes.i = {best.i}\nmodes.j = {best.j}\n"
                                          f"modes.k = {best.k}\nalpha.value = {best.alpha!r}\n")
        exit_code = main(["verify", "--config", str(cfg), "--out", str(tmp_path / "out")])
    ok = res.found and floor_ok and exit_code == 0 and elapsed < 120
    detail = (f"witness (i,j,k)=({best.i},{best.j},{best.k}) alpha={best.alpha} scale={best.scale} "
              f"worst margin {best.report.worst_margin:.3e}; verify exit {exit_code}; "
              f"{res.evaluated} configs in {elapsed:.2f}s") if best else "no candidate"
    record(6, ok, detail)
    assert ok


def test_7_window_sufficiency(witness_search):
    res, _ = witness_search
    bad = res.counterexamples
    ok = not bad
    record(7, ok, f"{len(res.window_checks)} in-window samples, {len(bad)} counterexamples")
    assert ok


def test_8_determinism(tmp_path):
    cfg = tmp_path / "ref.conf"
    cfg.write_text(REFERENCE_CONFIG)
    outputs = []
    for run in ("a", "b"):
        out = tmp_path / run
        assert main(["spectrum", "--config", str(cfg), "--out", str(out)]) == 0
        assert main(["verify", "--config", str(cfg), "--out", str(out)]) == 0
        outputs.append(((out / "spectrum.csv").read_bytes(), (out / "report.json").read_bytes()))
    ok = outputs[0] == outputs[1]
    record(8, ok, "spectrum.csv and report.json byte-identical across runs" if ok else "outputs differ")
    assert ok
