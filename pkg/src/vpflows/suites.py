"""Experiment bundles behind the command line: each returns a :class:`RunReport` fragment."""

from __future__ import annotations

import numpy as np

from .entropy import (OriginBump, entropy_derivative_check, entropy_suspension, fixed_point_count,
                      periodic_points, variance_estimate)
from .invariants import (helicity_class_consistency, helicity_tube_wedge, rotation_per_time,
                         cocycle_integrate_generator, ruelle_numeric, ruelle_tube_closed)
from .local_functionals import find_zeros, min_period, s_functional
from .model import (BumpProfile1D, CatSuspension, FlowBoxField, ScalarProfile1D, Trig2D, TrigField3T,
                    TubeProfile, abc_sine_field)
from .numerics import QuadratureSpec
from .perturbations import (FranksInput, box_bump, delta_helicity_scan, franks_local_field,
                            helicity_corrector, l2_bump_pair, lift_axiom_field, ruelle_shift_family)
from .report import INFORMATIVE, RunReport, csv_text

SUITES = ("ruelle-shift", "franks", "lift", "entropy", "localfn")
DEFAULT_EPS = (1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2, 1e-1)
CAT = ((2, 1), (1, 1))
# RK4 phase error on a uniform rotation is ~ (w dt)^5 / 120 per step; 24000 steps over T = 200
# keep the rate error near 1e-10
ROT_STEPS = 24000


def _fragment() -> RunReport:
    return RunReport("", "", "", 0)


def _cert_blocks(rep: RunReport, prefix: str, cert) -> None:
    for c in cert.clauses:
        rep.add(f"{prefix}.{c.name}", cert.inputs, {"value": c.measured}, {"at_most": c.bound},
                {"bound": c.bound}, c.passed)
    rep.add(f"{prefix}.info", cert.inputs, cert.info, {}, {}, INFORMATIVE)


# --- invariants of a single model -------------------------------------------------------------

def tube_invariants(tp: TubeProfile, horizon: float = 200.0, tol: float = 1e-9,
                    grid=(64, 8, 8)) -> RunReport:
    rep = _fragment()
    inputs = {"class_start": list(tp.class_start), "frame_offset": list(tp.frame_offset),
              "interval": list(tp.interval)}
    h = helicity_tube_wedge(tp)
    (a, b), (c, d) = tp.class_start, tp.class_end()
    rep.add("helicity.wedge", inputs,
            {"value": h.value, "int_BG": h.int_BG, "int_AF": h.int_AF, "boundary_term": h.boundary_term,
             "parts_residual": h.parts_residual, "branch": h.branch, "orientation": h.orientation},
            {"cd_minus_ab": c * d - a * b, "parts_residual": 0.0}, {"parts_residual": tol},
            h.parts_residual <= tol)
    cc = helicity_class_consistency(tp, tol=tol)
    rep.add("helicity.class_consistency", inputs,
            {"class_end": list(cc.class_end), "class_vector": list(cc.class_vector),
             "class_residual": cc.class_residual, "exact_change_delta": cc.exact_change_delta,
             "shifted_delta": cc.shifted_delta, "checks": cc.checks,
             "class_vector_convention": "(int G dt, -int F dt)"},
            {"exact_change_delta": 0.0, "shifted_delta": cc.predicted_shift_delta}, {"abs": tol}, cc.passed)
    closed = ruelle_tube_closed(tp)
    est = ruelle_numeric(tp, horizon, tuple(grid))
    rep.add("ruelle.closed_vs_numeric", {**inputs, "horizon": horizon, "grid": list(grid)},
            est.summary(), {"value": closed}, {"apriori_bound": est.apriori_bound, "fitted_bound": est.bound},
            abs(est.error) <= est.apriori_bound)
    rep.series["ruelle_samples"] = est.samples_csv()
    return rep


def field_invariants(field: TrigField3T, seed_grid: int = 16) -> RunReport:
    rep = _fragment()
    zeros = find_zeros(field, seed_grid)
    hyperbolic = all(z.hyperbolic for z in zeros)
    measured = {"zeros": [z.to_dict() for z in zeros], "count": len(zeros), "all_hyperbolic": hyperbolic}
    if hyperbolic:
        s = s_functional(zeros)
        measured.update(S=s.value, no_zeros=s.no_zeros)
    rep.add("localfn.zeros_and_S", {"seed_grid": seed_grid, "field": field.to_dict()}, measured, {}, {},
            INFORMATIVE if hyperbolic else False)
    return rep


def suspension_invariants(model: CatSuspension, order: int = 12) -> RunReport:
    rep = _fragment()
    ent = entropy_suspension(model.M, model.roof, order)
    rep.add("entropy.suspension", {"model": model.to_dict(), "order": order},
            {"value": ent.value, "bracket": list(ent.bracket)}, {}, {}, INFORMATIVE)
    mp = min_period(model, 10)
    rep.add("localfn.min_period", {"model": model.to_dict(), "n_max": 10}, mp.to_dict(), {}, {},
            INFORMATIVE)
    return rep


def model_invariants(model, horizon: float = 200.0, order: int = 12, tol: float = 1e-9,
                     seed: int = 0) -> RunReport:
    if isinstance(model, TubeProfile):
        return tube_invariants(model, horizon, tol)
    if isinstance(model, TrigField3T):
        return field_invariants(model)
    if isinstance(model, CatSuspension):
        return suspension_invariants(model, order)
    if isinstance(model, FlowBoxField):
        rep = _fragment()
        _cert_blocks(rep, "lift", lift_axiom_field(model, 0.01 * model.delta, 0.1, seed=seed))
        return rep
    raise TypeError(f"unsupported model {type(model).__name__}")


# --- named suites -----------------------------------------------------------------------------

def reference_tube() -> TubeProfile:
    """F = 1 + sin(2 pi t)/2, G = 1, offset (1, 0)."""
    return TubeProfile(ScalarProfile1D(1.0, sin=(0.5,)), ScalarProfile1D(1.0), (0.0, 0.0), (1, 0))


def suite_ruelle_shift(eps_list=DEFAULT_EPS, tol: float = 1e-9, horizon: float = 200.0) -> RunReport:
    rep = _fragment()
    tp = reference_tube()
    f = l2_bump_pair(tp.A).f
    mass = float(f.integral(0.0, 1.0))
    m = tp.frame_offset[0]
    base = ruelle_tube_closed(tp)
    d_ru = [ruelle_tube_closed(ruelle_shift_family(tp, f, e)) - base for e in eps_list]
    pred = [e * m * mass for e in eps_list]
    gap = max(abs(x - y) for x, y in zip(d_ru, pred))
    rep.add("shift.delta_ruelle", {"eps": list(eps_list), "int_f": mass, "m": m},
            {"delta_ru": d_ru, "max_gap": gap}, {"delta_ru": pred}, {"abs": 1e-12}, gap <= 1e-12)

    scan = delta_helicity_scan(tp, f, eps_list)
    fd_gap = abs(scan.slope - scan.fd_slope)
    rep.add("shift.delta_helicity_scan", {"eps": list(eps_list), "class_start": "held fixed"},
            scan.to_dict(), {"r2_at_least": 0.999, "slope": scan.fd_slope}, {"slope_vs_fd": 1e-6},
            scan.r2 >= 0.999 and fd_gap <= 1e-6)
    rep.add("shift.claimed_slope", {}, {"slope": scan.slope, "claimed": scan.claimed_slope,
                                        "parts_prediction": scan.parts_slope, "end_fixed_slope": scan.end_fixed_slope},
            {}, {}, INFORMATIVE)
    rep.series["shift_scan"] = csv_text(["eps", "delta_h", "delta_h_end_fixed"],
                                        zip(scan.eps, scan.delta_h, scan.delta_h_end_fixed))

    e = eps_list[-1]
    pert = ruelle_shift_family(tp, f, e)
    shear_gaps = {}
    for p in (1, -2):
        s0, s1 = tp.integer_shear(p), pert.integer_shear(p)
        shear_gaps[str(p)] = max(abs((ruelle_tube_closed(s1) - ruelle_tube_closed(s0)) - (ruelle_tube_closed(pert) - base)),
                                 abs(helicity_tube_wedge(s0).value - helicity_tube_wedge(tp).value))
    sg = max(shear_gaps.values())
    rep.add("shift.shear_conjugation", {"shears": [1, -2], "eps": e}, {"gaps": shear_gaps},
            {"gap": 0.0}, {"abs": 1e-12}, sg <= 1e-12)
    split = []
    for s in (0.3, 0.5, 0.77):
        split.append(abs(ruelle_tube_closed(pert.restrict(0.0, s)) + ruelle_tube_closed(pert.restrict(s, 1.0))
                         - ruelle_tube_closed(pert)))
    rep.add("shift.split_additivity", {"cuts": [0.3, 0.5, 0.77], "eps": e}, {"gaps": split},
            {"gap": 0.0}, {"abs": 1e-12}, max(split) <= 1e-12)

    bump = box_bump(((0.3, 0.7), (0.2, 0.6), (0.1, 0.5)), 0.05)
    cor = helicity_corrector(tp, bump)
    _cert_blocks(rep, "corrector", cor)
    return rep


def franks_reference_input(kappa: float = 0.1, T: float = 1.0) -> FranksInput:
    return FranksInput(BumpProfile1D(0.5, 0.4, 1.0), BumpProfile1D(0.5, 0.3, 0.7),
                       BumpProfile1D(0.5, 0.35, -0.4), kappa, T)


def suite_franks(seed: int = 0) -> RunReport:
    rep = _fragment()
    cert = franks_local_field(franks_reference_input(), seed=seed, raise_on_fail=False)
    _cert_blocks(rep, "franks", cert)
    return rep


def lift_draws(seed: int, count: int = 5):
    rng = np.random.default_rng(seed)
    return [(float(rng.uniform(0.005, 0.02)), float(rng.uniform(0.05, 0.2))) for _ in range(count)]


def suite_lift(seed: int = 0) -> RunReport:
    rep = _fragment()
    box = FlowBoxField(1.0)
    for i, (x0, eps) in enumerate(lift_draws(seed)):
        _cert_blocks(rep, f"lift[{i}]", lift_axiom_field(box, x0, eps, seed=seed))
    return rep


def suite_entropy(order: int = 12, seed: int = 0) -> RunReport:
    rep = _fragment()
    counts = []
    for n in range(1, order + 1):
        counts.append([n, periodic_points(CAT, n).count, fixed_point_count(CAT, n)])
    ok = all(c == e for _, c, e in counts)
    rep.add("entropy.fixed_point_counts", {"M": CAT, "n_max": order}, {"counts": [c[1] for c in counts]},
            {"abs_det_Mn_minus_I": [c[2] for c in counts]}, {"exact": True}, ok)
    rep.series["fixed_point_counts"] = csv_text(["n", "enumerated", "abs_det"], counts)

    exact = float(np.log((3 + np.sqrt(5)) / 2))
    h1 = entropy_suspension(CAT, 1.0, order)
    rep.add("entropy.unit_roof", {"order": order}, {"value": h1.value, "bracket": list(h1.bracket)},
            {"value": exact}, {"abs": 0.02}, abs(h1.value - exact) <= 0.02)
    h2 = entropy_suspension(CAT, 2.0, order)
    width = h1.bracket_width + h2.bracket_width
    rep.add("entropy.roof_scaling", {"order": order, "roofs": [1.0, 2.0]},
            {"h_roof2": h2.value, "half_h_roof1": h1.value / 2}, {"relation": "h(2 r) = h(r) / 2"},
            {"bracket": width}, abs(h2.value - h1.value / 2) <= width)
    if order >= 10:
        h10 = entropy_suspension(CAT, 1.0, 10)
        rep.add("entropy.order_gap", {"orders": [10, order]}, {"gap": h1.value - h10.value}, {}, {}, INFORMATIVE)

    cos = Trig2D(0.0, ((1, 0, 1.0, 0.0),))
    dz = entropy_derivative_check(CAT, cos, n=order)
    rep.add("entropy.derivative_mean_zero", {"f": cos.to_dict(), "order": order}, dz.to_dict(),
            {"slope": 0.0, "quad_residual_at_most": 1e-3}, {"slope": 0.02},
            abs(dz.fd_slope) <= 0.02 and dz.quad_residual <= 1e-3)
    dc = entropy_derivative_check(CAT, 0.3, n=order)
    rep.add("entropy.derivative_constant", {"f": 0.3, "order": order}, dc.to_dict(),
            {"slope": 0.3 * dc.en}, {"abs": 0.05 * dc.en},
            abs(dc.fd_slope - 0.3 * dc.en) <= 0.05 * dc.en and dc.quad_residual <= 1e-3)
    rep.series["entropy_cos"] = dz.series_csv()
    rep.series["entropy_const"] = dc.series_csv()

    v_cos = variance_estimate(CAT, cos, seed=seed)
    rep.add("entropy.variance_nonnegative", {"f": cos.to_dict()}, v_cos.to_dict(), {"value_at_least": 0.0},
            {"stderr_multiple": 2}, v_cos.value >= -2 * v_cos.stderr)
    bump = OriginBump()
    v_b = variance_estimate(CAT, bump, seed=seed)
    rep.add("entropy.variance_bump_positive", {"f": "origin bump, half width 0.15"}, v_b.to_dict(),
            {"value_above": 0.0}, {"stderr_multiple": 3}, v_b.value > 3 * v_b.stderr)
    c2 = dz.quad_coeffs[2]
    target = dz.en * v_cos.value
    rel = abs(c2 - target) / abs(target)
    rep.add("entropy.quadratic_vs_variance", {"f": cos.to_dict()},
            {"c2": c2, "En_times_var": target, "half_En2_var": 0.5 * dz.en ** 2 * v_cos.value,
             "relative_gap": rel, "within_30_percent": rel <= 0.3},
            {"c2": target}, {"relative": 0.3}, INFORMATIVE)
    return rep


def suite_localfn() -> RunReport:
    rep = _fragment()
    X = abc_sine_field()
    zeros = find_zeros(X)
    s = s_functional(zeros)
    target = 48 * np.pi ** 2
    rep.add("localfn.S_abc", {"field": "(sin 2pi y, sin 2pi z, sin 2pi x)", "seed_grid": 16},
            {"S": s.value, "zero_count": len(zeros), "zeros": [z.to_dict() for z in zeros]},
            {"S": target, "zero_count": 8}, {"abs": 1e-6}, abs(s.value - target) <= 1e-6 and len(zeros) == 8)
    tau = 0.3
    s_scaled = s_functional(find_zeros(X.scale(1 + tau))).value
    rep.add("localfn.S_scaling", {"tau": tau}, {"S_scaled": s_scaled}, {"S_scaled": (1 + tau) ** 2 * s.value},
            {"abs": 1e-10 * max(1.0, s_scaled)}, abs(s_scaled - (1 + tau) ** 2 * s.value) <= 1e-10 * max(1.0, s_scaled))
    perm = (1, 2, 0)
    s_perm = s_functional(find_zeros(X.permute(perm))).value
    rep.add("localfn.S_permutation", {"perm": list(perm)}, {"S_perm": s_perm}, {"S": s.value}, {"abs": 0.0},
            s_perm == s.value)
    empty = s_functional(find_zeros(TrigField3T(Trig2D(1.0), Trig2D(), Trig2D())))
    rep.add("localfn.S_constant_field", {"field": "(1, 0, 0)"}, {"S": empty.value, "no_zeros": empty.no_zeros},
            {"S": 0.0, "no_zeros": True}, {}, empty.value == 0.0 and empty.no_zeros)

    rows = []
    roofs = {"1": Trig2D(1.0), "1+0.1cos": Trig2D(1.0, ((1, 0, 0.1, 0.0),)), "2": Trig2D(2.0)}
    expected = {"1": 1.0, "1+0.1cos": 1.1, "2": 2.0}
    results = {}
    for name, roof in roofs.items():
        mp = min_period(CatSuspension(CAT, roof))
        results[name] = mp
        rep.add(f"localfn.min_period[{name}]", {"roof": roof.to_dict(), "n_max": 10}, mp.to_dict(),
                {"value": expected[name], "certified": True}, {"abs": 1e-12},
                abs(mp.value - expected[name]) <= 1e-12 and mp.certified_at > 0)
        for row in mp.table:
            rows.append([name, row["order"], row.get("min_period", float("nan")), row["orbits"]])
    rep.series["min_period_orbits"] = csv_text(["roof", "order", "min_period", "orbits"], rows)
    base = results["1+0.1cos"].value
    sc = 2.5
    scaled = min_period(CatSuspension(CAT, roofs["1+0.1cos"].scale(sc))).value
    rep.add("localfn.min_period_scaling", {"s": sc}, {"value": scaled}, {"value": sc * base}, {"abs": 1e-10},
            abs(scaled - sc * base) <= 1e-10)
    comp = min_period(CatSuspension(CAT, roofs["1+0.1cos"].compose_linear(CAT))).value
    rep.add("localfn.min_period_roof_composition", {"roof": "roof o M"}, {"value": comp}, {"value": base},
            {"abs": 1e-12}, abs(comp - base) <= 1e-12)
    return rep


def rotation_engine_checks() -> RunReport:
    """Shear has zero rotation rate; uniform rotation at 0.3 turns per unit time returns 0.3."""
    rep = _fragment()
    T = 200.0
    shear = cocycle_integrate_generator(lambda t: np.array([[0.0, 1.0], [0.0, 0.0]]), T, ROT_STEPS)
    rot = cocycle_integrate_generator(lambda t: 2 * np.pi * 0.3 * np.array([[0.0, -1.0], [1.0, 0.0]]), T, ROT_STEPS)
    r_shear, r_rot = rotation_per_time(shear), rotation_per_time(rot)
    drift = max(shear.det_drift, rot.det_drift)
    rep.add("rotation.engine", {"T": T, "steps": ROT_STEPS},
            {"shear_rate": r_shear, "rotation_rate": r_rot, "det_drift": drift},
            {"shear_rate": 0.0, "rotation_rate": 0.3}, {"shear": 1e-12, "rotation": 1e-9, "det_drift": 1e-8},
            abs(r_shear) <= 1e-12 and abs(r_rot - 0.3) <= 1e-9 and drift <= 1e-8)
    return rep


def run_suite(name: str, seed: int = 0, order: int = 12, horizon: float = 200.0, tol: float = 1e-9,
              eps_list=DEFAULT_EPS) -> RunReport:
    if name == "ruelle-shift":
        rep = rotation_engine_checks()
        rep.extend(suite_ruelle_shift(eps_list, tol, horizon))
        return rep
    if name == "franks":
        return suite_franks(seed)
    if name == "lift":
        return suite_lift(seed)
    if name == "entropy":
        return suite_entropy(order, seed)
    if name == "localfn":
        return suite_localfn()
    raise KeyError(name)
