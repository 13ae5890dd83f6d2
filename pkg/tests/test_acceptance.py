"""End-to-end acceptance checks.

Run with ``pytest tests/test_acceptance.py -s`` to see one PASS/FAIL line
per criterion. Tolerances are fixed here and never loosened.
"""

import json
import time

import numpy as np
import pytest

from speclag.families import ExponentialFamily, LawlorFamily, lawlor_phi
from speclag.forms import fs_hermitian_matrix, fs_metric, kahler_potential_scale, omega_fs
from speclag.harness import build_family, dump_report, export_pointcloud, parse_config, run_checks, sample_plan
from speclag.meancurv import convergence_study, laplace_beltrami_residual, ParamGrid
from speclag.sigma import make_rng, sigma_sample
from speclag.verify import (
    angle_constancy,
    angle_slope,
    condition_Im_residual,
    condition_r2_residual,
    det_identity_check,
    lagrangian_residual,
    theorem_sweep,
)

from conftest import random_complex
from corpus import S_SAMPLES, corpus
from oracles import lawlor_phi_closed_form_n2_equal, omega_from_potential

LAGRANGIAN_TOL = 1e-9
NEGATIVE_FLOOR = 1e-3
IDENTITY_TOL = 1e-10
QUAD_TOL = 1e-10
CONDITION_TOL = 1e-10
ANGLE_TOL = 1e-8
SLOPE_TOL = 1e-6
FS_DET_TOL = 1e-10
FS_ORACLE_RTOL = 1e-6
ORDER_RANGE = (1.5, 2.5)
UNEQUAL_RATIO = 10.0


def report(number, ok, detail):
    print(f"\nACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'}: {detail}")
    assert ok, detail


def lawlor_grid():
    rng = make_rng(11)
    configs = []
    for n in (2, 3):
        for a in (0.5, 1.0, 2.0):
            configs.append(LawlorFamily(np.full(n, a), rng.uniform(-np.pi, np.pi, n)))
    return configs


def unequal_grid():
    return [LawlorFamily([1.0, 1.0 + d], [0.0, 0.0]) for d in (0.25, 0.5, 1.0)]


def test_01_fubini_study_lagrangian_equal_a():
    s = np.linspace(-2.0, 2.0, 41)
    start = time.perf_counter()
    worst = 0.0
    for fam in lawlor_grid():
        pts = sigma_sample(np.ones(fam.n), 1.0, 200, seed=fam.n)
        worst = max(worst, lagrangian_residual(fam, "fubini-study", pts, s).max_residual)
    elapsed = time.perf_counter() - start
    report(1, worst < LAGRANGIAN_TOL and elapsed < 10.0, f"max FS residual {worst:.2e} (< {LAGRANGIAN_TOL:g}), {elapsed:.2f} s (< 10 s)")


def test_02_fubini_study_fails_for_unequal_a():
    pts = sigma_sample([1.0, 1.0], 1.0, 200, seed=2)
    res = [lagrangian_residual(fam, "fubini-study", pts, S_SAMPLES).max_residual for fam in unequal_grid()]
    ok = min(res) > NEGATIVE_FLOOR and res[0] < res[1] < res[2]
    report(2, ok, "FS residuals for delta 0.25/0.5/1: " + ", ".join(f"{r:.4f}" for r in res) + " (> 1e-3, increasing)")


def test_03_standard_form_baseline():
    worst = 0.0
    for fam in lawlor_grid() + unequal_grid():
        pts = sigma_sample(np.ones(fam.n), 1.0, 200, seed=3)
        worst = max(worst, lagrangian_residual(fam, "standard", pts, S_SAMPLES).max_residual)
    report(3, worst < LAGRANGIAN_TOL, f"max standard residual {worst:.2e} over 9 Lawlor configurations")


def test_04_determinant_identity():
    rng = make_rng(4)
    worst = 0.0
    for k in range(100):
        n = int(rng.integers(2, 5))
        if k % 2 == 0:
            fam = LawlorFamily(rng.uniform(0.3, 3.0, n), rng.uniform(-np.pi, np.pi, n))
        else:
            C = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.2, 2.0))
            lam = np.sign(C) * rng.uniform(0.2, 3.0, n)
            fam = ExponentialFamily(lam, C)
        x = sigma_sample(fam.lam, fam.C, 1, seed=int(rng.integers(2**31))).pop().x
        s = float(rng.uniform(-2.0, 2.0))
        worst = max(worst, det_identity_check(fam, x, s)[2])
    report(4, worst < IDENTITY_TOL, f"max relative error {worst:.2e} over 100 draws (< {IDENTITY_TOL:g})")


def test_05_quadrature_oracle():
    fam = LawlorFamily([1.0, 1.0], [0.0, 0.0])
    at_one = abs(lawlor_phi(fam, 0, 1.0) - np.pi / 6)
    s = np.linspace(-3.0, 3.0, 20)
    err = np.max(np.abs(lawlor_phi(fam, 0, s) - lawlor_phi_closed_form_n2_equal(s)))
    ok = at_one < QUAD_TOL and err < QUAD_TOL
    report(5, ok, f"|phi(1) - pi/6| = {at_one:.1e}, max arctan deviation {err:.1e} (< {QUAD_TOL:g})")


def test_06_condition_equivalences():
    lines = []
    ok = True
    for name, fam, pts, _, _ in corpus(sigma_count=60, seed=6):
        st = lagrangian_residual(fam, "standard", pts, S_SAMPLES).max_residual
        fs = lagrangian_residual(fam, "fubini-study", pts, S_SAMPLES).max_residual
        im = condition_Im_residual(fam, S_SAMPLES).max_residual
        r2 = condition_r2_residual(fam, S_SAMPLES).max_residual
        ok &= (im <= CONDITION_TOL) == (st <= LAGRANGIAN_TOL)
        if im <= CONDITION_TOL:
            ok &= (r2 <= CONDITION_TOL) == (fs <= LAGRANGIAN_TOL)
        lines.append(f"{name}: st {st:.0e} im {im:.0e} fs {fs:.0e} r2 {r2:.0e}")
    report(6, ok, "; ".join(lines))


def test_07_angle_behavior():
    psi = np.array([0.3, -1.1])
    fam = LawlorFamily([1.5, 1.5], psi)
    trace = angle_constancy(fam, sigma_sample([1.0, 1.0], 1.0, 100, seed=7), S_SAMPLES)
    expected = np.sum(psi) + np.pi / 2
    phase_err = abs((trace.fitted_phase - expected + np.pi / 2) % np.pi - np.pi / 2)
    exp_fam = ExponentialFamily([1.0, 2.0], 1.0)
    x = sigma_sample(exp_fam.lam, exp_fam.C, 1, seed=7)[0].x
    slope = angle_slope(exp_fam, x, np.linspace(-1.0, 1.0, 41))
    ok = trace.std_dev < ANGLE_TOL and phase_err < ANGLE_TOL and abs(slope - 5.0) < SLOPE_TOL
    report(7, ok, f"angle std {trace.std_dev:.1e}, phase error {phase_err:.1e}, exponential slope {slope:.12f}")


def test_08_fubini_study_internals():
    rng = np.random.default_rng(8)
    det_err = 0.0
    for n in (2, 3, 4):
        z = random_complex(rng, 100, n)
        K = kahler_potential_scale(z)
        det_err = max(det_err, float(np.max(np.abs(np.linalg.det(fs_hermitian_matrix(z)) * K ** (n + 1) - 1))))
    scaled = plain = 0.0
    for _ in range(100):
        z, u, v = random_complex(rng, 3, 2)
        diff = abs(omega_fs(z, u, v) - omega_from_potential(z, u, v))
        scaled = max(scaled, diff / np.sqrt(fs_metric(z, u, u) * fs_metric(z, v, v)))
        plain = max(plain, diff / abs(omega_from_potential(z, u, v)))
    ok = det_err < FS_DET_TOL and scaled < FS_ORACLE_RTOL
    report(8, ok, f"det identity error {det_err:.1e}; form vs potential oracle {scaled:.1e} relative to |u||v| (plain relative worst {plain:.1e})")


def test_09_mean_curvature_convergence():
    start = time.perf_counter()
    equal = convergence_study(LawlorFamily([1.0, 1.0]), "conformal-fubini-study", [32, 64, 128])
    unequal = laplace_beltrami_residual(LawlorFamily([1.0, 2.0]), "conformal-fubini-study", ParamGrid(128, 128)).residual
    elapsed = time.perf_counter() - start
    res = [r for _, r, _ in equal]
    orders = [o for _, _, o in equal[1:]]
    ratio = unequal / res[-1]
    ok = (
        res[0] > res[1] > res[2]
        and all(ORDER_RANGE[0] <= o <= ORDER_RANGE[1] for o in orders)
        and ratio >= UNEQUAL_RATIO
        and elapsed < 60.0
    )
    detail = (
        "residuals " + ", ".join(f"{r:.3e}" for r in res)
        + ", orders " + ", ".join(f"{o:.2f}" for o in orders)
        + f", unequal/equal {ratio:.2f}, {elapsed:.1f} s"
    )
    report(9, ok, detail)


def test_09_tension_field_variant():
    # not an acceptance line: the same study with the ambient connection term included
    equal = convergence_study(LawlorFamily([1.0, 1.0]), "conformal-fubini-study", [32, 64, 128], connection=True)
    unequal = laplace_beltrami_residual(LawlorFamily([1.0, 2.0]), "conformal-fubini-study", ParamGrid(128, 128), connection=True)
    orders = [o for _, _, o in equal[1:]]
    print("\nINFO tension field: orders " + ", ".join(f"{o:.2f}" for o in orders) + f", unequal/equal {unequal.residual / equal[-1][1]:.0f}")
    assert all(ORDER_RANGE[0] <= o <= ORDER_RANGE[1] for o in orders)
    assert unequal.residual / equal[-1][1] >= UNEQUAL_RATIO


def test_10_determinism(tmp_path):
    text = json.dumps(
        {
            "family": {"kind": "lawlor", "a": [1.0, 2.0], "psi": [0.3, 0.1]},
            "samples": {"seed": 10, "sigma_count": 50, "s_count": 21},
            "checks": ["lagrangian_st", "lagrangian_fs", "condition_im", "condition_r2", "det_identity", "angle"],
        }
    )
    outputs = []
    for k in range(2):
        cfg = parse_config(text)
        rep = run_checks(cfg)
        rep.pop("wall_time")
        fam = build_family(cfg.family)
        path = tmp_path / f"cloud{k}.csv"
        export_pointcloud(fam, sample_plan(cfg, fam), path)
        outputs.append((dump_report(rep), path.read_bytes()))
    ok = outputs[0] == outputs[1]
    report(10, ok, f"report {len(outputs[0][0])} bytes and CSV {len(outputs[0][1])} bytes identical across runs")


@pytest.mark.parametrize("seed", [0, 1])
def test_10_sweep_is_seeded(seed):
    a = [r.to_dict() for r in theorem_sweep(2, [(1, 1), (1, 2)], sigma_count=20, seed=seed)]
    b = [r.to_dict() for r in theorem_sweep(2, [(1, 1), (1, 2)], sigma_count=20, seed=seed)]
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
