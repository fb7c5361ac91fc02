"""Helicity corrector: the field ``Y`` with ``iota_Y mu = d(sqrt(1 + f) alpha)`` on a toric tube."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model.profiles import BumpProfile1D
from ..model.tube import TubeProfile
from ..numerics import QuadratureSpec, jacobian_fd, quad1d, tensor_quad
from .certified import CertifiedField, Clause


class CorrectorDomainError(ValueError):
    pass


@dataclass(frozen=True)
class SeparableBump3D:
    """``amplitude * bt(t) * bx(x) * by(y)`` from unit bumps; support is the product box."""

    bt: BumpProfile1D
    bx: BumpProfile1D
    by: BumpProfile1D
    amplitude: float = 1.0

    @property
    def box(self):
        return (self.bt.support, self.bx.support, self.by.support)

    def __call__(self, t, x, y):
        return self.amplitude * self.bt(t) * self.bx(x) * self.by(y)

    def grad(self, t, x, y):
        a, bt, bx, by = self.amplitude, self.bt(t), self.bx(x), self.by(y)
        return (a * self.bt.d1(t) * bx * by, a * bt * self.bx.d1(x) * by, a * bt * bx * self.by.d1(y))


def box_bump(box, amplitude: float) -> SeparableBump3D:
    """Separable bump filling ``box = ((t0, t1), (x0, x1), (y0, y1))``."""
    parts = [BumpProfile1D(0.5 * (lo + hi), 0.5 * (hi - lo)) for lo, hi in box]
    return SeparableBump3D(*parts, amplitude=amplitude)


def corrector_components(tp: TubeProfile, f, t, x, y):
    """``(Y^t, Y^x, Y^y)`` from ``d(g alpha)`` with ``g = sqrt(1 + f)``.

    ``d(g A dx + g B dy) = P dt^dx + Q dt^dy + R dx^dy`` with
    ``P = g_t A + g G``, ``Q = g_t B - g F``, ``R = g_x B - g_y A``; dividing by
    ``mu = dt^dx^dy`` gives ``Y = (R, -Q, P)``.
    """
    t, x, y = np.broadcast_arrays(*(np.asarray(v, float) for v in (t, x, y)))
    fv = f(t, x, y)
    g = np.sqrt(1.0 + fv)
    ft, fx, fy = f.grad(t, x, y)
    gt, gx, gy = (d / (2.0 * g) for d in (ft, fx, fy))
    A, B, F, G = tp.A(t), tp.B(t), tp.F(t), tp.G(t)
    P = gt * A + g * G
    Q = gt * B - g * F
    R = gx * B - gy * A
    return R, -Q, P


def _beta_wedge_dbeta(tp: TubeProfile, f):
    """Coefficient of ``beta ^ d beta`` for ``beta = g alpha``, computed without simplification."""
    def coeff(t, x, y):
        fv = f(t, x, y)
        g = np.sqrt(1.0 + fv)
        ft, _, _ = f.grad(t, x, y)
        gt = ft / (2.0 * g)
        A, B, F, G = tp.A(t), tp.B(t), tp.F(t), tp.G(t)
        P = gt * A + g * G
        Q = gt * B - g * F
        # beta ^ d beta = (g A) Q dx^dt^dy + (g B) P dy^dt^dx = (-gA Q + gB P) mu
        return -g * A * Q + g * B * P
    return coeff


def helicity_corrector(tp: TubeProfile, f: SeparableBump3D, check_grid: int = 32,
                       spec: QuadratureSpec | None = None) -> CertifiedField:
    """Corrected field with the helicity change computed by two independent routes."""
    spec = spec or QuadratureSpec(tol=1e-13)
    (t0, t1), (x0, x1), (y0, y1) = f.box
    lo, hi = tp.interval
    if not (lo < t0 and t1 < hi and 0.0 <= x0 and x1 <= 1.0 and 0.0 <= y0 and y1 <= 1.0):
        raise ValueError("support box must lie in the open tube and one torus period")
    axes = [np.linspace(a, b, check_grid) for a, b in f.box]
    grid = np.meshgrid(*axes, indexing="ij")
    if float(np.min(f(*grid))) <= -1.0:
        raise CorrectorDomainError("f <= -1 on the check grid; sqrt(1 + f) is undefined")

    def evaluator(t, x, y):
        return corrector_components(tp, f, t, x, y)

    # route 1: separable quadrature of f (AF + BG)
    A, B = tp.A, tp.B
    h = lambda t: A(t) * tp.F(t) + B(t) * tp.G(t)  # noqa: E731
    dH1 = f.amplitude * quad1d(lambda t: f.bt(t) * h(t), t0, t1, spec) \
        * f.bx.integral() * f.by.integral()
    # route 2: 3D quadrature of beta^dbeta - alpha^dalpha over the support box
    coeff = _beta_wedge_dbeta(tp, f)
    dH2 = tensor_quad(lambda t, x, y: coeff(t, x, y) - h(t), f.box, n=24, panels=4)

    rng = np.random.default_rng(12345)
    out_t = rng.uniform(lo, hi, 4000)
    out_x = rng.uniform(0, 1, 4000)
    out_y = rng.uniform(0, 1, 4000)
    outside = (out_t <= t0) | (out_t >= t1) | (out_x <= x0) | (out_x >= x1) | (out_y <= y0) | (out_y >= y1)
    Yt, Yx, Yy = evaluator(out_t[outside], out_x[outside], out_y[outside])
    Xt, Xx, Xy = tp.field(out_t[outside])
    outside_err = float(max(np.max(np.abs(Yt - Xt)), np.max(np.abs(Yx - Xx)), np.max(np.abs(Yy - Xy))))

    pts = np.column_stack([rng.uniform(a, b, 50) for a, b in f.box])
    div = 0.0
    for p in pts:
        J = jacobian_fd(lambda q: np.array(evaluator(*q)), p, 1e-5)
        div = max(div, abs(float(np.trace(J))))
    clauses = (
        Clause("delta_h_two_routes", abs(dH1 - dH2), 1e-8),
        Clause("equals_base_outside_support", outside_err, 1e-12),
        Clause("divergence_fd", div, 1e-6),
    )
    return CertifiedField("helicity_corrector", evaluator,
                          {"support_box": [list(b) for b in f.box], "amplitude": f.amplitude},
                          clauses, {"delta_h": dH1, "delta_h_3d": dH2})
