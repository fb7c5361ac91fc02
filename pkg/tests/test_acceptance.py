"""Acceptance criteria, one test each.  Every test records a single PASS/FAIL line
(printed in the terminal summary, or directly when run as a script)."""

import json
import time

import numpy as np
import pytest

from vpflows.cli import main
from vpflows.entropy import (OriginBump, entropy_derivative_check, entropy_suspension, fixed_point_count,
                             periodic_points, variance_estimate)
from vpflows.invariants import (helicity_class_consistency, helicity_tube_wedge, ruelle_numeric)
from vpflows.local_functionals import find_zeros, min_period, s_functional
from vpflows.model import CatSuspension, FlowBoxField, ScalarProfile1D, Trig2D, TubeProfile, abc_sine_field
from vpflows.model.profiles import random_positive_profile, random_profile
from vpflows.perturbations import lift_axiom_field
from vpflows.report import RunReport
from vpflows.suites import lift_draws, rotation_engine_checks, suite_franks, suite_ruelle_shift

CAT = ((2, 1), (1, 1))
LINES: dict[int, str] = {}


def record(k: int, ok: bool, detail: str, elapsed: float, limit: float) -> None:
    timed = elapsed < limit
    status = "PASS" if ok and timed else "FAIL"
    LINES[k] = f"criterion {k:2d}: {status}  {detail}; {elapsed:.1f} s (limit {limit:g} s)"
    print(LINES[k])
    assert ok, LINES[k]
    assert timed, LINES[k]


def test_criterion_01_parts_identity():
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    worst = 0.0
    for _ in range(50):
        tp = TubeProfile(random_profile(rng), random_positive_profile(rng), tuple(rng.normal(size=2)))
        h = helicity_tube_wedge(tp)
        worst = max(worst, h.parts_residual)
    record(1, worst <= 1e-9, f"50 random tubes, max |int BG - [AB] - int AF| = {worst:.2e} (tol 1e-9)",
           time.perf_counter() - t0, 5)


def test_criterion_02_helicity_wedge_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(20):
        tp = TubeProfile(ScalarProfile1D(0.0), random_positive_profile(rng), tuple(rng.normal(size=2)))
        (a, b), (c, d) = tp.class_start, tp.class_end()
        worst = max(worst, abs(helicity_tube_wedge(tp).value - (c * d - a * b)))
    pinned = helicity_tube_wedge(TubeProfile(ScalarProfile1D(1.0), ScalarProfile1D(1.0)))
    cc_worst = 0.0
    cc_ok = True
    for _ in range(5):
        tp = TubeProfile(random_profile(rng), random_positive_profile(rng), tuple(rng.normal(size=2)))
        rep = helicity_class_consistency(tp, shift=(1.0, -1.0))
        cc_ok &= rep.passed
        cc_worst = max(cc_worst, abs(rep.exact_change_delta), abs(rep.shifted_delta - rep.predicted_shift_delta))
    ok = worst <= 1e-9 and abs(pinned.value - 0.0) <= 1e-12 and pinned.branch == "cd-ab+2intAF" and cc_ok
    record(2, ok, f"F=0 family gap {worst:.2e}; F=G=1 pinned H = {pinned.value:.3g} "
           f"(branch {pinned.branch}); class checks max {cc_worst:.2e}", time.perf_counter() - t0, 5)


def test_criterion_03_ruelle_closed_vs_numeric():
    t0 = time.perf_counter()
    tp = TubeProfile(ScalarProfile1D(1.0, sin=(0.5,)), ScalarProfile1D(1.0), (0.0, 0.0), (1, 0))
    horizons = (25.0, 50.0, 100.0, 200.0)
    errs = [abs(ruelle_numeric(tp, T, (64, 8, 8)).error) for T in horizons]
    slope = float(np.polyfit(np.log(horizons), np.log(errs), 1)[0])
    ok = errs[-1] <= 0.01 and slope <= -0.9
    record(3, ok, f"|numeric(T=200) - 1| = {errs[-1]:.2e} (tol 0.01); log-log slope {slope:.3f} (need <= -0.9)",
           time.perf_counter() - t0, 60)


def test_criterion_04_rotation_engine():
    t0 = time.perf_counter()
    b = rotation_engine_checks().blocks[0]
    m = b.measured
    record(4, b.passed is True, f"shear rate {m['shear_rate']:.1e}, rotation rate error "
           f"{abs(m['rotation_rate'] - 0.3):.1e}, det drift {m['det_drift']:.1e}", time.perf_counter() - t0, 5)


def test_criterion_05_ruelle_shift_family():
    t0 = time.perf_counter()
    rep = suite_ruelle_shift()
    blocks = {b.name: b for b in rep.blocks}
    names = ("shift.delta_ruelle", "shift.delta_helicity_scan", "shift.shear_conjugation", "shift.split_additivity")
    ok = all(blocks[n].passed is True for n in names)
    scan = blocks["shift.delta_helicity_scan"].measured
    record(5, ok, f"dRu gap {blocks['shift.delta_ruelle'].measured['max_gap']:.1e}; dH R^2 = {scan['r2']:.6f}, "
           f"|slope - fd| = {abs(scan['gap_to_fd']):.1e} (slope {scan['slope']:.4f}, claimed {scan['claimed_slope']:.1e}); "
           f"shear/split exact", time.perf_counter() - t0, 30)


def test_criterion_06_franks_certificates():
    t0 = time.perf_counter()
    rep = suite_franks(seed=0)
    gating = [b for b in rep.blocks if b.passed != "informative"]
    failed = [b.name for b in gating if not b.passed]
    detail = ", ".join(f"{b.name.split('.')[1]} {b.measured['value']:.1e}" for b in gating)
    record(6, not failed and len(gating) == 7, detail + (f"; failed {failed}" if failed else ""),
           time.perf_counter() - t0, 60)


def test_criterion_07_lift_axiom():
    t0 = time.perf_counter()
    box = FlowBoxField(1.0)
    worst = {"endpoint_error": 0.0, "helicity_defect": 0.0, "c1_ratio": 0.0}
    c1_ok = True
    for x0, eps in lift_draws(seed=0):
        cert = lift_axiom_field(box, x0, eps)
        worst["endpoint_error"] = max(worst["endpoint_error"], cert.clause("endpoint_error").measured)
        worst["helicity_defect"] = max(worst["helicity_defect"], cert.clause("helicity_defect").measured)
        c1 = cert.clause("c1_distance")
        worst["c1_ratio"] = max(worst["c1_ratio"], c1.measured / (cert.info["A"] * eps))
        c1_ok &= c1.passed
    ok = worst["endpoint_error"] <= 1e-6 and worst["helicity_defect"] <= 1e-8 and c1_ok
    record(7, ok, f"5 draws: endpoint {worst['endpoint_error']:.1e}, helicity defect {worst['helicity_defect']:.1e}, "
           f"C1 distance up to {worst['c1_ratio']:.1f} A eps (bound 3.15 A eps)", time.perf_counter() - t0, 30)


def test_criterion_08_entropy():
    t0 = time.perf_counter()
    counts_ok = all(periodic_points(CAT, n).count == fixed_point_count(CAT, n) for n in range(1, 13))
    h1 = entropy_suspension(CAT, 1.0, 12)
    h2 = entropy_suspension(CAT, 2.0, 12)
    exact = float(np.log((3 + np.sqrt(5)) / 2))
    scale_gap = abs(h2.value - h1.value / 2)
    ok = counts_ok and abs(h1.value - exact) <= 0.02 and scale_gap <= h1.bracket_width + h2.bracket_width
    record(8, ok, f"counts exact n<=12: {counts_ok}; h(1) = {h1.value:.5f} vs {exact:.5f}; "
           f"|h(2) - h(1)/2| = {scale_gap:.1e}", time.perf_counter() - t0, 120)


def test_criterion_09_derivative_formula():
    t0 = time.perf_counter()
    cos = Trig2D(0.0, ((1, 0, 1.0, 0.0),))
    dz = entropy_derivative_check(CAT, cos)
    dc = entropy_derivative_check(CAT, 0.3)
    v = variance_estimate(CAT, cos, seed=0)
    vb = variance_estimate(CAT, OriginBump(), seed=0)
    rel = abs(dz.quad_coeffs[2] - dz.en * v.value) / abs(dz.en * v.value)
    ok = (abs(dz.fd_slope) <= 0.02 and abs(dc.fd_slope - 0.3 * dc.en) <= 0.05 * dc.en
          and max(dz.quad_residual, dc.quad_residual) <= 1e-3 and v.value >= -2 * v.stderr
          and vb.value > 3 * vb.stderr)
    record(9, ok, f"mean-zero slope {dz.fd_slope:.1e}; const slope {dc.fd_slope:.4f} vs {0.3 * dc.en:.4f}; "
           f"quad resid {max(dz.quad_residual, dc.quad_residual):.1e}; var {v.value:.3f}+-{v.stderr:.3f}; "
           f"bump var {vb.value / vb.stderr:.0f} se; c2 vs En*Var gap {rel:.0%} (informative)",
           time.perf_counter() - t0, 120)


def test_criterion_10_local_functionals():
    t0 = time.perf_counter()
    X = abc_sine_field()
    S = s_functional(find_zeros(X)).value
    tau = 0.25
    S_tau = s_functional(find_zeros(X.scale(1 + tau))).value
    roof = Trig2D(1.0, ((1, 0, 0.1, 0.0),))
    p1 = min_period(CatSuspension(CAT, Trig2D(1.0)))
    p2 = min_period(CatSuspension(CAT, roof))
    p_s = min_period(CatSuspension(CAT, roof.scale(1.7)))
    ok = (abs(S - 48 * np.pi ** 2) <= 1e-6 and abs(S_tau - (1 + tau) ** 2 * S) <= 1e-10 * S
          and abs(p_s.value - 1.7 * p2.value) <= 1e-10 and abs(p1.value - 1.0) <= 1e-12
          and abs(p2.value - 1.1) <= 1e-12 and p1.certified_at > 0 and p2.certified_at > 0)
    record(10, ok, f"S - 48 pi^2 = {S - 48 * np.pi ** 2:.1e}; S scaling gap {abs(S_tau - (1 + tau) ** 2 * S):.1e}; "
           f"P_min = {p1.value:g}, {p2.value:g} (certified at order {p1.certified_at}, {p2.certified_at})",
           time.perf_counter() - t0, 30)


def test_criterion_11_determinism_and_interface(tmp_path):
    t0 = time.perf_counter()
    a, b = tmp_path / "a", tmp_path / "b"
    code_a = main(["suite", "all", "--seed", "7", "--out", str(a)])
    code_b = main(["suite", "all", "--seed", "7", "--jobs", "2", "--out", str(b)])
    text = (a / "report.json").read_text()
    identical = text == (b / "report.json").read_text() and all(
        (a / "series" / p.name).read_bytes() == p.read_bytes() for p in (b / "series").iterdir())
    round_trip = RunReport.from_json(text).to_json() == text
    failed = [blk["name"] for blk in json.loads(text)["blocks"] if blk["pass"] is False]
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "toric_tube", "F": 3}')
    codes = (code_a, code_b, main(["invariants", "--model", str(bad)]), main(["suite", "bogus"]),
             main(["suite", "localfn", "--out", str(tmp_path / "c")]))
    # exit 1 exactly when some block failed, 2 for parse/usage errors, 0 for a clean suite
    contract = codes == ((1, 1) if failed else (0, 0)) + (2, 2, 0)
    elapsed = time.perf_counter() - t0
    record(11, identical and round_trip and contract,
           f"byte-identical: {identical}; round-trip: {round_trip}; exit codes {codes} "
           f"(failed blocks: {len(failed)})", elapsed, 360)


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
