"""L2 bump solver, the Ruelle-shift family, and the helicity response scan."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..invariants.helicity import helicity_tube_wedge
from ..model.profiles import BumpCombination, BumpProfile1D, PerturbedProfile, as_perturbed
from ..model.tube import TubeProfile
from ..numerics import QuadratureSpec, gauss_legendre, quad1d

GRAM_COND_MAX = 1e12


class GramSingularityError(ValueError):
    pass


def _moments(bump: BumpProfile1D, funcs) -> list[float]:
    lo, hi = bump.support
    nodes, weights = gauss_legendre(40, lo, hi, 8)
    b = bump(nodes)
    return [float(np.sum(weights * b * g(nodes))) for g in funcs]


@dataclass(frozen=True)
class L2BumpSolution:
    f: BumpCombination
    coefficients: tuple[float, ...]
    residual_mass: float
    residual_moment: float
    condition: float


def _solve_bumps(bumps, rows, rhs, window):
    G = np.array([_moments(b, rows) for b in bumps]).T
    cond = float(np.linalg.cond(G))
    if not np.isfinite(cond) or cond > GRAM_COND_MAX:
        raise GramSingularityError(
            f"Gram matrix on window ({window[0]:g}, {window[1]:g}) has condition {cond:.3g}; "
            "the moment functions are effectively dependent there")
    if G.shape[0] == G.shape[1]:
        c = np.linalg.solve(G, rhs)
    else:
        c = np.linalg.lstsq(G, rhs, rcond=None)[0]
    return c, cond


def l2_bump_pair(A, window: tuple[float, float] = (0.2, 0.8),
                 spec: QuadratureSpec | None = None) -> L2BumpSolution:
    """Two disjoint bumps in ``window`` combined so that ``int f = 1`` and ``int f A = 0``."""
    w0, w1 = window
    if not 0.0 < w0 < w1 < 1.0:
        raise ValueError("window must satisfy 0 < w0 < w1 < 1")
    quarter = (w1 - w0) / 4.0
    bumps = [BumpProfile1D(w0 + quarter, 0.9 * quarter), BumpProfile1D(w1 - quarter, 0.9 * quarter)]
    rows = [lambda t: np.ones_like(t), A]
    c, cond = _solve_bumps(bumps, rows, np.array([1.0, 0.0]), window)
    f = BumpCombination(tuple(b.scale(float(ci)) for b, ci in zip(bumps, c)))
    spec = spec or QuadratureSpec(tol=1e-13)
    mass = quad1d(f, 0.0, 1.0, spec) - 1.0
    moment = quad1d(lambda t: f(t) * A(t), 0.0, 1.0, spec)
    return L2BumpSolution(f, tuple(float(v) for v in c), mass, moment, cond)


def null_bump_triple(A, window: tuple[float, float] = (0.2, 0.8), scale: float = 1.0) -> BumpCombination:
    """Three disjoint bumps with ``int f = 0`` and ``int f A = 0`` (first weight fixed by ``scale``)."""
    w0, w1 = window
    sixth = (w1 - w0) / 6.0
    bumps = [BumpProfile1D(w0 + (2 * k + 1) * sixth, 0.9 * sixth) for k in range(3)]
    M = np.array([_moments(b, [lambda t: np.ones_like(t), A]) for b in bumps]).T
    # null vector of the 2x3 moment matrix
    null = np.linalg.svd(M)[2][-1]
    null = null / null[0] * scale
    return BumpCombination(tuple(b.scale(float(c)) for b, c in zip(bumps, null)))


def ruelle_shift_family(tp: TubeProfile, f, eps: float) -> TubeProfile:
    """``F -> F + eps f`` with class start and frame offset unchanged."""
    if eps == 0.0:
        return tp
    lo, hi = f.support
    if not 0.0 < lo and hi < 1.0:
        raise ValueError("shift direction must be compactly supported in (0, 1)")
    return replace(tp, F=as_perturbed(tp.F).add(f, float(eps)))


@dataclass(frozen=True)
class HelicityScan:
    eps: tuple[float, ...]
    delta_h: tuple[float, ...]
    delta_h_end_fixed: tuple[float, ...]
    slope: float
    intercept: float
    r2: float
    fd_slope: float
    claimed_slope: float
    parts_slope: float
    end_fixed_slope: float
    warnings: tuple[str, ...]

    def to_dict(self) -> dict:
        return {"eps": list(self.eps), "delta_h": list(self.delta_h),
                "delta_h_end_fixed": list(self.delta_h_end_fixed), "slope": self.slope,
                "intercept": self.intercept, "r2": self.r2, "fd_slope": self.fd_slope,
                "claimed_slope": self.claimed_slope, "parts_slope": self.parts_slope,
                "end_fixed_slope": self.end_fixed_slope, "gap_to_claim": self.slope - self.claimed_slope,
                "gap_to_fd": self.slope - self.fd_slope, "warnings": list(self.warnings)}


def _linfit(x, y):
    x, y = np.asarray(x, float), np.asarray(y, float)
    slope, intercept = np.polyfit(x, y, 1)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum((y - (slope * x + intercept)) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(slope), float(intercept), r2


def delta_helicity_scan(tp: TubeProfile, f, eps_list, spec: QuadratureSpec | None = None,
                        fd_eps: tuple[float, float] = (1e-4, 2e-4)) -> HelicityScan:
    """Helicity change along the shift family, class start held fixed.

    The secondary column holds the end class ``(c, d)`` fixed instead, by
    moving ``b0`` with ``eps int f``.  The fitted slope is compared with the
    claimed value ``-2 int f A`` and with a small-eps finite difference.
    """
    eps_list = [float(e) for e in eps_list]
    if len(eps_list) < 5:
        raise ValueError("need at least 5 eps values")
    nz = [abs(e) for e in eps_list if e != 0.0]
    if not nz or max(nz) < 10.0 * min(nz):
        raise ValueError("eps values must span at least a decade")
    spec = spec or QuadratureSpec(tol=1e-13)
    h0 = helicity_tube_wedge(tp, spec).value
    mass = float(f.integral(0.0, 1.0))

    def dh(e, end_fixed=False):
        s = ruelle_shift_family(tp, f, e)
        if end_fixed:
            s = s.with_start(tp.class_start[0], tp.class_start[1] + e * mass)
        return helicity_tube_wedge(s, spec).value - h0

    d = [dh(e) for e in eps_list]
    d_end = [dh(e, True) for e in eps_list]
    slope, intercept, r2 = _linfit(eps_list, d)
    end_slope = _linfit(eps_list, d_end)[0]
    e1, e2 = fd_eps
    fd = (dh(e2) - dh(e1)) / (e2 - e1)
    A = tp.A
    fA = quad1d(lambda t: f(t) * A(t), 0.0, 1.0, spec)
    claimed = -2.0 * fA
    parts = -float(A(tp.interval[1])) * mass + 2.0 * fA
    warnings = () if r2 >= 0.999 else (f"nonlinear response: R^2 = {r2:.6f} < 0.999",)
    return HelicityScan(tuple(eps_list), tuple(d), tuple(d_end), slope, intercept, r2, fd, claimed, parts,
                        end_slope, warnings)
