"""Lift-axiom field in a flow box: steer the trajectory through the origin to ``x = x0``."""

from __future__ import annotations

import numpy as np

from ..model.fields import FlowBoxField
from ..model.profiles import PlateauBump1D
from ..numerics import flow_rk4, tensor_quad
from .certified import CertifiedField, Clause

K_FACTOR = 3.0
C1_SLACK = 1.05
FD_STEP = 1e-4


class LiftConstructionError(ValueError):
    pass


class LiftField:
    """``Y`` with ``iota_Y mu = d(x dy + H dz)``, ``H = A x0 a(x) b(y) c(z) y``.

    This gives ``Y = X + (H_y, -H_x, 0)`` with ``X = d/dz``.  On the plateau of
    ``a`` and ``b`` the field is ``d/dz + c(z) A x0 d/dx``, and ``A = 1 / int c``
    makes the trajectory from ``(0, 0, -delta)`` exit at ``x = x0``.
    """

    def __init__(self, box: FlowBoxField, x0: float, eps: float):
        if not 0.0 < eps < 0.5:
            raise LiftConstructionError("eps must lie in (0, 1/2)")
        if x0 == 0.0:
            raise LiftConstructionError("x0 must be non-zero")
        self.box, self.x0, self.eps = box, float(x0), float(eps)
        d = box.delta
        self.radius = abs(x0) / eps
        if self.radius > 1.0:
            raise LiftConstructionError("support radius |x0|/eps exceeds the unit box; choose smaller x0")
        # square support inscribed in the disk of radius |x0|/eps
        half = self.radius / np.sqrt(2.0)
        inner = 2.0 * abs(x0)
        if inner >= half:
            raise LiftConstructionError(
                f"plateau 2|x0| = {inner:g} does not fit inside the support half-width {half:g}; need eps < 1/(2 sqrt 2)")
        self.a = PlateauBump1D(0.0, inner, half)
        self.b = PlateauBump1D(0.0, inner, half)
        self.c = PlateauBump1D(0.0, 0.7 * d, 0.9 * d)
        self.A = 1.0 / self.c.integral()
        self.half = half

    def H(self, x, y, z):
        return self.A * self.x0 * self.a(x) * self.b(y) * self.c(z) * y

    def H_grad(self, x, y, z):
        k = self.A * self.x0
        a, b, c = self.a(x), self.b(y), self.c(z)
        yb = b + y * self.b.d1(y)
        return (k * self.a.d1(x) * b * c * y, k * a * c * yb, k * a * b * self.c.d1(z) * y)

    def difference(self, x, y, z):
        """``Y - X = (H_y, -H_x, 0)``."""
        Hx, Hy, _ = self.H_grad(x, y, z)
        return Hy, -Hx, np.zeros(np.broadcast(x, y, z).shape)

    def __call__(self, x, y, z):
        dx, dy, dz = self.difference(x, y, z)
        return dx, dy, dz + 1.0

    def inner_field(self, s, state):
        """Closed-form inner-region field ``dx/ds = c(z) A x0`` with ``z = s - delta``."""
        return np.array([self.c(s - self.box.delta) * self.A * self.x0])


def _fd_jacobian_grid(fun, X, Y, Z, h):
    """Central-difference derivatives of the two nonzero components on a grid."""
    out = []
    for k in range(3):
        e = [0.0, 0.0, 0.0]
        e[k] = h
        plus = fun(X + e[0], Y + e[1], Z + e[2])
        minus = fun(X - e[0], Y - e[1], Z - e[2])
        out.append([(p - m) / (2 * h) for p, m in zip(plus[:2], minus[:2])])
    return out


def lift_axiom_field(box: FlowBoxField, x0: float, eps: float, grid: int = 96,
                     steps: int = 4000, seed: int = 0) -> CertifiedField:
    field = LiftField(box, x0, eps)
    d = box.delta

    # endpoint via the closed-form inner field, and full-field RK4 at half tolerance
    path = flow_rk4(field.inner_field, [0.0], 2.0 * d, steps)
    x_end = float(path.endpoint[0])
    xs = path.states[:, 0]
    if np.max(np.abs(xs)) >= 2.0 * abs(x0):
        raise LiftConstructionError("trajectory leaves the inner plateau before z = delta; choose smaller x0")

    def full(s, p):
        Yx, Yy, Yz = field(p[0], p[1], p[2])
        return np.array([Yx, Yy, Yz], dtype=float)
    full_path = flow_rk4(lambda s, p: full(s, p), [0.0, 0.0, -d], 2.0 * d, steps // 2)
    x_full = float(full_path.endpoint[0])

    # helicity defect: beta^dbeta = (H - x H_x) mu for beta = x dy + H dz
    sq = (-field.half, field.half)
    defect = tensor_quad(lambda x, y, z: field.H(x, y, z) - x * field.H_grad(x, y, z)[0],
                         (sq, sq, (-d, d)), n=24, panels=4)

    # C1 distance on the support box
    axes = [np.linspace(-field.half, field.half, grid), np.linspace(-field.half, field.half, grid),
            np.linspace(-d, d, grid)]
    X, Y, Z = np.meshgrid(*axes, indexing="ij")
    V = field.difference(X, Y, Z)
    c0 = float(max(np.max(np.abs(V[0])), np.max(np.abs(V[1]))))
    h = FD_STEP * field.half
    J = _fd_jacobian_grid(field.difference, X, Y, Z, h)
    c1 = float(max(np.max(np.abs(comp)) for col in J for comp in col))
    entries = {f"d{'xyz'[k]} V{'xy'[i]}": float(np.max(np.abs(J[k][i]))) for k in range(3) for i in range(2)}
    c1_norm = max(c0, c1)
    bound = K_FACTOR * field.A * eps * C1_SLACK

    # support: Y - X vanishes outside the disk of radius |x0|/eps
    rng = np.random.default_rng(seed)
    pts = []
    while sum(len(p) for p in pts) < 10_000:
        cand = rng.uniform(-1, 1, size=(20_000, 2))
        pts.append(cand[np.hypot(cand[:, 0], cand[:, 1]) >= field.radius])
    pts = np.concatenate(pts)[:10_000]
    zs = rng.uniform(-d, d, len(pts))
    Vout = field.difference(pts[:, 0], pts[:, 1], zs)
    outside = float(max(np.max(np.abs(Vout[0])), np.max(np.abs(Vout[1]))))

    clauses = (
        Clause("endpoint_error", abs(x_end - x0), 1e-6),
        Clause("endpoint_full_field", abs(x_full - x0), 2e-6),
        Clause("helicity_defect", abs(defect), 1e-8),
        Clause("c1_distance", c1_norm, bound),
        Clause("support_outside_ball", outside, 0.0),
    )
    info = {"A": field.A, "K": K_FACTOR * field.A, "c0_distance": c0, "c1_derivative_part": c1,
            "c1_over_A_eps": c1_norm / (field.A * eps), "derivative_entries": entries,
            "support_radius": field.radius, "support_half_width": field.half, "x_end": x_end,
            "x_end_full_field": x_full}
    return CertifiedField("lift_axiom_field", field,
                          {"delta": d, "x0": float(x0), "eps": float(eps), "grid": grid}, clauses, info)
