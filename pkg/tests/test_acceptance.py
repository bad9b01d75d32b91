"""Acceptance criteria at full scale.

Each test records one PASS/FAIL line, printed together in the terminal
summary under "acceptance criteria".
"""

import json
import os
import subprocess
import sys
import time

import numpy as np

from gyroball import gyration_matrix, mobius_add, norm_bounds
from gyroball.harness import VerifyConfig, run_suite

DIMS = (2, 3, 5, 8)


def summarize(reports):
    worst = max(r.max_residual for r in reports)
    fails = sum(r.failures for r in reports)
    return fails, worst


def loosest(reports, checks=None):
    return max(
        c["tolerance"]
        for r in reports
        for name, c in r.checks.items()
        if checks is None or name in checks
    )


def test_criterion_1_axioms(acceptance_report):
    t0 = time.perf_counter()
    reports = run_suite("axioms", VerifyConfig(dims=DIMS, samples=10_000, r_max=0.95))
    elapsed = time.perf_counter() - t0
    fails, worst = summarize(reports)
    ok = fails == 0 and worst <= 1e-9 and loosest(reports) <= 1e-9 and elapsed < 60
    acceptance_report(
        1, ok, f"axioms dims {DIMS} x 1e4: failures={fails} max_residual={worst:.2e} (<=1e-9) time={elapsed:.1f}s (<60s)"
    )
    assert ok


def test_criterion_2_table1(acceptance_report):
    reports = run_suite("table1", VerifyConfig(dims=DIMS, samples=10_000))
    fails, worst = summarize(reports)
    ok = fails == 0 and worst <= 1e-9 and loosest(reports) <= 1e-9
    acceptance_report(2, ok, f"table1 dims {DIMS} x 1e4: failures={fails} max_residual={worst:.2e} (<=1e-9)")
    assert ok


def test_criterion_3_inequality(acceptance_report):
    reports = run_suite("inequality", VerifyConfig(dims=DIMS, samples=100_000))
    fails, worst = summarize(reports)
    u, v = np.array([0.5, 0.0]), np.array([0.3, 0.0])
    s = float(np.linalg.norm(mobius_add(u, v)))
    lo, hi = norm_bounds(u, v)
    witness = (
        abs(s - 0.6956522) <= 1e-7
        and abs(lo - 0.1739130) <= 1e-7
        and abs(hi - 0.9411765) <= 1e-7
        and lo <= s <= hi
    )
    ok = fails == 0 and loosest(reports) <= 1e-12 and witness
    acceptance_report(
        3,
        ok,
        f"inequality dims {DIMS} x 1e5: failures={fails} slack=1e-12; "
        f"collinear |u+v|={s:.7f} bounds=({lo:.7f}, {hi:.7f})",
    )
    assert ok


def test_criterion_4_backend_equivalence(acceptance_report):
    dims = tuple(range(2, 9))
    far = run_suite("backend_equiv", VerifyConfig(dims=dims, samples=10_000, r_max=0.95))
    near = run_suite("backend_equiv", VerifyConfig(dims=dims, samples=10_000, r_max=1 - 1e-6))
    pair = {"add", "gyration"}
    ff, fw = summarize(far)
    nf, nw = summarize(near)
    ok = (
        ff == 0
        and nf == 0
        and loosest(far, pair) <= 1e-12
        and loosest(near, pair) <= 1e-8
    )
    acceptance_report(
        4,
        ok,
        f"backend_equiv dims 2-8 x 1e4: r_max=0.95 failures={ff} max={fw:.2e} (<=1e-12); "
        f"r_max=1-1e-6 failures={nf} max={nw:.2e} (<=1e-8)",
    )
    assert ok


def test_criterion_5_metric(acceptance_report):
    dT = run_suite("dT_metric", VerifyConfig(dims=DIMS, samples=100_000))
    topo = run_suite("topology", VerifyConfig(dims=DIMS, samples=10_000))
    df, dw = summarize(dT)
    tf, _ = summarize(topo)
    tol_ok = (
        loosest(dT, {"symmetry", "triangle", "identity", "dT_le_dM"}) <= 1e-12
        and loosest(dT, {"poincare_consistency"}) <= 1e-9
        and loosest(dT, {"origin_arctan"}) <= np.finfo(float).eps
        and loosest(topo, {f"dT_le_dM_eps{e:g}" for e in (0.1, 0.5, 1, 2)}) <= 1e-12
    )
    ok = df == 0 and tf == 0 and tol_ok
    acceptance_report(
        5,
        ok,
        f"dT_metric dims {DIMS} x 1e5: failures={df} max={dw:.2e}; "
        f"topology eps in (0.1, 0.5, 1, 2) x 1e4: failures={tf}",
    )
    assert ok


def test_criterion_6_isometry_group(acceptance_report):
    reports = run_suite("isometry_group", VerifyConfig(dims=DIMS, samples=10_000))
    fails, worst = summarize(reports)
    tol_ok = (
        loosest(reports, {"compose_pointwise", "inverse"}) <= 1e-10
        and loosest(reports, {"associativity"}) <= 1e-9
        and loosest(reports, {"symmetry_fixed_point", "transport"}) <= 1e-12
    )
    dets = [r.notes["gyration_det_min"] for r in reports] + [r.notes["gyration_det_max"] for r in reports]
    ok = fails == 0 and tol_ok
    acceptance_report(
        6,
        ok,
        f"isometry_group dims {DIMS} x 1e4: failures={fails} max={worst:.2e}; "
        f"det Gyr in [{min(dets):.15f}, {max(dets):.15f}]",
    )
    assert ok


def test_criterion_7_clifford_core(acceptance_report):
    reports = run_suite("clifford_core", VerifyConfig(dims=DIMS, samples=10_000))
    fails, worst = summarize(reports)
    m = gyration_matrix([0.5, 0.0], [0.0, 0.5])
    hand = np.array([[15, 8], [-8, 15]]) / 17
    fixture = float(np.max(np.abs(m - hand)))
    relations = {
        "anticommutator",
        "vector_square",
        "inverse_formula",
        "group_membership",
        "eta_quotient",
        "eta_multiplicative",
        "anti_automorphisms",
        "associativity",
    }
    tol_ok = (
        loosest(reports, relations) <= 1e-12
        and loosest(reports, {"gyration_orthogonal", "sandwich_norm"}) <= 1e-10
    )
    ok = fails == 0 and tol_ok and fixture <= 1e-12
    acceptance_report(
        7,
        ok,
        f"clifford_core dims {DIMS} x 1e4: failures={fails} max={worst:.2e}; hand fixture error={fixture:.1e}",
    )
    assert ok


def _verify_all(workers):
    env = {k: v for k, v in os.environ.items() if k != "GYROBALL_SEED"}
    proc = subprocess.run(
        [sys.executable, "-m", "gyroball", "verify", "--suite", "all", "--seed", "42", "--workers", str(workers)],
        capture_output=True,
        env=env,
        check=False,
    )
    return proc.returncode, proc.stdout


def test_criterion_8_determinism(acceptance_report):
    code1, out1 = _verify_all(1)
    code2, out2 = _verify_all(4)
    lines = out1.decode().splitlines()
    parsed = [json.loads(x) for x in lines]
    ok = code1 == 0 and code2 == 0 and out1 == out2 and len(parsed) == 9 * len(DIMS)
    acceptance_report(
        8,
        ok,
        f"verify --suite all --seed 42 with 1 and 4 workers: exit=({code1}, {code2}) "
        f"{len(lines)} JSONL lines, byte-identical={out1 == out2}",
    )
    assert ok
