"""Franks-type local field in flat flow-box coordinates, built from a rescaled mollifier."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..model.profiles import PlateauBump1D
from ..numerics import grid_sup
from .certified import CertificateError, CertifiedField, Clause

PLATEAU = 1.0 / 32.0
EXP_CAP = 700.0
NOMINAL_C1_SUM = 1000.0


def _h_recipe(s):
    """Cutoff ``h(s) = phi((s - 1/32) / phi(1/2 - s))`` with ``phi(s) = exp(-1/s)``; returns (h, h', h'').

    With ``q = s - 1/32``, ``w = 1/(1/2 - s)`` and ``u = q e^w`` the chain rule is
    written in terms of ``e^-w`` so that nothing overflows as ``s -> 1/2``.
    """
    s = np.asarray(s, dtype=float)
    h = np.where(s >= 0.5, 1.0, 0.0)
    h1 = np.zeros(s.shape)
    h2 = np.zeros(s.shape)
    mid = (s > PLATEAU) & (s < 0.5)
    if np.any(mid):
        q = s[mid] - PLATEAU
        w = 1.0 / (0.5 - s[mid])
        Ei = np.exp(-w)
        inv_u = Ei / q
        live = inv_u < EXP_CAP
        hv = np.zeros(q.shape)
        d1 = np.zeros(q.shape)
        d2 = np.zeros(q.shape)
        q, w, Ei, inv_u = q[live], w[live], Ei[live], inv_u[live]
        ph = np.exp(-inv_u)
        lin = 1.0 + q * w ** 2                                  # u' / e^w
        quad = w ** 2 * lin + w ** 2 + 2.0 * q * w ** 3           # u'' / e^w
        hv[live] = ph
        d1[live] = ph * lin * inv_u / q                          # phi(u) u' / u^2
        d2[live] = ph * (lin ** 2 * (inv_u ** 2 / q ** 2 - 2.0 * inv_u / q ** 2) + inv_u / q * quad)
        h[mid], h1[mid], h2[mid] = hv, d1, d2
    return h, h1, h2


def _h_spline(s):
    """Quintic smoothstep cutoff rising on [1/8, 1/2] (C2 fallback)."""
    s = np.asarray(s, dtype=float)
    lo, hi = 0.125, 0.5
    x = np.clip((s - lo) / (hi - lo), 0.0, 1.0)
    inside = (x > 0) & (x < 1)
    h = 6 * x ** 5 - 15 * x ** 4 + 10 * x ** 3
    h1 = np.where(inside, 30 * x ** 2 * (x - 1) ** 2 / (hi - lo), 0.0)
    h2 = np.where(inside, 60 * x * (x - 1) * (2 * x - 1) / (hi - lo) ** 2, 0.0)
    return h, h1, h2


_CUTOFFS = {"recipe": _h_recipe, "spline": _h_spline}


def _unit_mollifier(s, variant: str):
    """``f(s) = s (1 - h(|s|))`` and its first two derivatives (f is odd)."""
    s = np.asarray(s, dtype=float)
    a = np.abs(s)
    h, h1, h2 = _CUTOFFS[variant](a)
    f = s * (1.0 - h)
    d1 = 1.0 - h - a * h1
    d2 = np.sign(s) * (-2.0 * h1 - a * h2)
    return np.where(a >= 0.5, 0.0, f), np.where(a >= 0.5, 0.0, d1), np.where(a >= 0.5, 0.0, d2)


@dataclass(frozen=True)
class Mollifier:
    """``f_k(s) = k f(s / k)``: equals ``s`` near 0 and vanishes for ``|s| >= k/2``."""

    kappa: float
    variant: str = "recipe"
    c0: float = field(default=np.nan, compare=False)
    c1: float = field(default=np.nan, compare=False)
    c2: float = field(default=np.nan, compare=False)

    def __call__(self, s):
        return self.kappa * _unit_mollifier(np.asarray(s, float) / self.kappa, self.variant)[0]

    def d1(self, s):
        return _unit_mollifier(np.asarray(s, float) / self.kappa, self.variant)[1]

    def d2(self, s):
        return _unit_mollifier(np.asarray(s, float) / self.kappa, self.variant)[2] / self.kappa

    @property
    def linear_radius(self) -> float:
        return self.kappa * (PLATEAU if self.variant == "recipe" else 0.125)

    def norms(self) -> dict:
        return {"c0": self.c0, "c1": self.c1, "c2": self.c2, "targets": {"c0": 1.0, "c1": 1.0, "c2": 100.0}}


def franks_mollifier(kappa: float, variant: str = "recipe", resolution: int = 1 << 16) -> Mollifier:
    """Mollifier with measured constants ``c0 = sup|f_k|/k``, ``c1 = sup|f_k'|``, ``c2 = k sup|f_k''|``.

    The constants are scale-free, so they are measured once on the unit
    profile over a fine grid of [-1/2, 1/2].
    """
    if not 0.0 < kappa <= 0.5:
        raise ValueError("kappa must lie in (0, 1/2]")
    if variant not in _CUTOFFS:
        raise ValueError(f"unknown mollifier variant {variant!r}")
    box = [(-0.5, 0.5)]
    c = [grid_sup(lambda s, k=k: _unit_mollifier(s, variant)[k], box, resolution).value for k in range(3)]
    return Mollifier(float(kappa), variant, *c)


Profile = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class FranksInput:
    """Traceless ``b(t) = [[b11, b12], [b21, -b11]]`` on [0, T] with radius ``kappa``.

    Entries are callables exposing ``derivative()``; ``b`` and ``b'`` must
    vanish at both ends.
    """

    b11: object
    b12: object
    b21: object
    kappa: float
    T: float

    def __post_init__(self):
        if not self.T > 0 or not 0 < self.kappa <= 0.5:
            raise ValueError("need T > 0 and kappa in (0, 1/2]")
        ends = np.array([0.0, self.T])
        for name in ("b11", "b12", "b21"):
            p = getattr(self, name)
            vals = np.abs(np.concatenate([np.atleast_1d(p(ends)), np.atleast_1d(p.derivative()(ends))]))
            if np.max(vals) > 1e-12:
                raise ValueError(f"{name} and its derivative must vanish at t = 0 and t = T")

    def matrix(self, t):
        t = np.asarray(t, dtype=float)
        b11, b12, b21 = self.b11(t), self.b12(t), self.b21(t)
        return np.stack([np.stack([b11, b12], -1), np.stack([b21, -b11], -1)], -2)

    def dmatrix(self, t):
        t = np.asarray(t, dtype=float)
        d11, d12, d21 = (getattr(self, n).derivative()(t) for n in ("b11", "b12", "b21"))
        return np.stack([np.stack([d11, d12], -1), np.stack([d21, -d11], -1)], -2)


class FranksField:
    """``W = (-psi_y, psi_x, 0)`` in coordinates (x, y, t).

    ``psi = -b11 f(x) f(y) + (b21/2) f(x)^2 chi(y) + s (b12/2) f(y)^2 chi(x)``.
    The cutoff ``chi`` (1 on ``|.| <= k/8``, 0 beyond ``k/2``) confines the
    one-variable terms to the support square; it does not touch the axis
    linearization.  ``s = -1`` (default) makes the axis Jacobian equal ``b``;
    ``s = +1`` is the literal sign and yields ``-b12`` in the (1, 2) entry.
    """

    def __init__(self, inp: FranksInput, moll: Mollifier, psi_b12_sign: int = -1):
        self.inp, self.f, self.sign = inp, moll, float(psi_b12_sign)
        self.chi = PlateauBump1D(0.0, inp.kappa / 8.0, inp.kappa / 2.0)

    def _coeffs(self, t, deriv=False):
        names = ("b11", "b12", "b21")
        ps = [getattr(self.inp, n) for n in names]
        if deriv:
            ps = [p.derivative() for p in ps]
        t = np.asarray(t, dtype=float)
        inside = (t > 0) & (t < self.inp.T)
        return [np.where(inside, p(t), 0.0) for p in ps]

    def _local(self, x, y):
        f, c = self.f, self.chi
        return (f(x), f(y), f.d1(x), f.d1(y), f.d2(x), f.d2(y), c(x), c(y), c.d1(x), c.d1(y),
                c.d2(x), c.d2(y))

    def psi(self, x, y, t):
        b11, b12, b21 = self._coeffs(t)
        fx, fy, cx, cy = self.f(x), self.f(y), self.chi(x), self.chi(y)
        return -b11 * fx * fy + 0.5 * b21 * fx ** 2 * cy + self.sign * 0.5 * b12 * fy ** 2 * cx

    def _grad(self, b, loc):
        b11, b12, b21 = b
        fx, fy, gx, gy, _, _, cx, cy, dcx, dcy, _, _ = loc
        s = self.sign
        psi_x = -b11 * gx * fy + b21 * fx * gx * cy + s * 0.5 * b12 * fy ** 2 * dcx
        psi_y = -b11 * fx * gy + 0.5 * b21 * fx ** 2 * dcy + s * b12 * fy * gy * cx
        return psi_x, psi_y

    def __call__(self, x, y, t):
        psi_x, psi_y = self._grad(self._coeffs(t), self._local(x, y))
        return -psi_y, psi_x, np.zeros(np.broadcast(x, y, t).shape)

    def dt(self, x, y, t):
        psi_x, psi_y = self._grad(self._coeffs(t, deriv=True), self._local(x, y))
        return -psi_y, psi_x

    def spatial_jacobian(self, x, y, t):
        """Analytic ``(dWx/dx, dWx/dy, dWy/dx, dWy/dy)``."""
        b11, b12, b21 = self._coeffs(t)
        fx, fy, gx, gy, hx, hy, cx, cy, dcx, dcy, ddcx, ddcy = self._local(x, y)
        s = self.sign
        psi_xx = -b11 * hx * fy + b21 * (gx ** 2 + fx * hx) * cy + s * 0.5 * b12 * fy ** 2 * ddcx
        psi_xy = -b11 * gx * gy + b21 * fx * gx * dcy + s * b12 * fy * gy * dcx
        psi_yy = -b11 * fx * hy + 0.5 * b21 * fx ** 2 * ddcy + s * b12 * (gy ** 2 + fy * hy) * cx
        return -psi_xy, -psi_yy, psi_xx, psi_xy

    def cutoff_constants(self) -> tuple[float, float]:
        """Scale-free ``(k sup|chi'|, k^2 sup|chi''|)`` measured on a fine grid."""
        k = self.inp.kappa
        box = [(-k / 2, k / 2)]
        return (k * grid_sup(self.chi.d1, box, 1 << 14).value, k * k * grid_sup(self.chi.d2, box, 1 << 14).value)


def _fd(fun, p, k, h):
    e = np.zeros(3)
    e[k] = h
    return (np.asarray(fun(*(p + e))) - np.asarray(fun(*(p - e)))) / (2 * h)


def franks_local_field(inp: FranksInput, variant: str = "recipe", psi_b12_sign: int = -1,
                       grid: int = 96, seed: int = 0, raise_on_fail: bool = True) -> CertifiedField:
    """Build ``W`` and certify support, divergence, axis linearization, bounds and primitive."""
    moll = franks_mollifier(inp.kappa, variant)
    W = FranksField(inp, moll, psi_b12_sign)
    k, T = inp.kappa, inp.T
    rng = np.random.default_rng(seed)
    h = 1e-6 * k

    # (a) support: exact zero outside the cylinder x^2 + y^2 < k^2 over (0, T)
    pts = []
    while sum(len(p) for p in pts) < 10_000:
        c = rng.uniform(-2 * k, 2 * k, size=(20_000, 2))
        pts.append(c[np.hypot(c[:, 0], c[:, 1]) >= k])
    xy = np.concatenate(pts)[:10_000]
    ts = rng.uniform(-0.2 * T, 1.2 * T, 10_000)
    out = np.array(W(xy[:, 0], xy[:, 1], ts))
    t_out = np.concatenate([rng.uniform(-0.5 * T, 0.0, 500), rng.uniform(T, 1.5 * T, 500)])
    xy_in = rng.uniform(-k / 2, k / 2, size=(1000, 2))
    out_t = np.array(W(xy_in[:, 0], xy_in[:, 1], t_out))
    support = float(max(np.max(np.abs(out)), np.max(np.abs(out_t))))

    # (b) divergence w.r.t. rho(t) dx^dy^dt for three densities; (primitive) d(-rho psi dt) = iota_W vol
    rhos = {"1": lambda t: 1.0 + 0.0 * t, "1+t/2": lambda t: 1.0 + t / 2.0, "2-t": lambda t: 2.0 - t / T}
    sample = np.column_stack([rng.uniform(-k / 2, k / 2, 200), rng.uniform(-k / 2, k / 2, 200),
                              rng.uniform(0.05 * T, 0.95 * T, 200)])
    div = {}
    prim = 0.0
    for name, rho in rhos.items():
        worst = 0.0
        for p in sample:
            def rW(x, y, t):
                wx, wy, wt = W(x, y, t)
                r = rho(t)
                return np.array([r * wx, r * wy, r * wt])
            dv = (_fd(rW, p, 0, h)[0] + _fd(rW, p, 1, h)[1] + _fd(rW, p, 2, 1e-4 * T)[2]) / rho(p[2])
            worst = max(worst, abs(float(dv)))
            # d(-rho psi dt) = -rho psi_x dx^dt - rho psi_y dy^dt ;
            # iota_W(rho dx^dy^dt) = rho (Wx dy^dt - Wy dx^dt)
            eta = lambda x, y, t: -rho(t) * W.psi(x, y, t)  # noqa: E731
            wx, wy, _ = W(*p)
            r = rho(p[2])
            prim = max(prim, abs(float(_fd(eta, p, 0, h)) + r * wy), abs(float(_fd(eta, p, 1, h)) - r * wx))
        div[name] = worst
    div_worst = max(div.values())

    # (c) axis linearization at 32 times
    times = np.linspace(0.0, T, 34)[1:-1]
    lin = 0.0
    for t in times:
        J = np.column_stack([_fd(lambda x, y, s: np.array(W(x, y, s)), np.array([0.0, 0.0, t]), j,
                                 1e-4 * (k if j < 2 else T)) for j in range(3)])
        target = np.zeros((3, 3))
        target[:2, :2] = inp.matrix(t)
        lin = max(lin, float(np.max(np.abs(J - target))))

    # (d) sup-norm bounds with measured mollifier constants
    ts_grid = np.linspace(0.0, T, 512)
    b_sup = float(np.max(np.abs(inp.matrix(ts_grid))))
    db_sup = float(np.max(np.abs(inp.dmatrix(ts_grid))))
    box = [(-k / 2, k / 2), (-k / 2, k / 2), (0.0, T)]
    sup_W = grid_sup(lambda x, y, t: np.maximum(*map(np.abs, W(x, y, t)[:2])), box, grid).value
    sup_dt = grid_sup(lambda x, y, t: np.maximum(*map(np.abs, W.dt(x, y, t))), box, grid).value
    jx = grid_sup(lambda x, y, t: np.maximum(*(np.abs(v) for v in W.spatial_jacobian(x, y, t)[0::2])),
                  box, grid).value
    jy = grid_sup(lambda x, y, t: np.maximum(*(np.abs(v) for v in W.spatial_jacobian(x, y, t)[1::2])),
                  box, grid).value
    c0, c1, c2 = moll.c0, moll.c1, moll.c2
    x1, x2 = W.cutoff_constants()
    # |psi_x|, |psi_y| <= k |b| (2 c0 c1 + c0^2 x1 / 2); the derivative sum covers psi_xx, psi_xy, psi_yy
    c0_factor = 2.0 * c0 * c1 + 0.5 * c0 ** 2 * x1
    c1_factor = 2.0 * (c1 ** 2 + 2.0 * c0 * c2 + 0.5 * c0 ** 2 * x2 + 2.0 * c0 * c1 * x1)
    clauses = (
        Clause("support_exact_zero", support, 0.0),
        Clause("divergence_rho", div_worst, 1e-6),
        Clause("axis_linearization", lin, 1e-6),
        Clause("c0_bound", sup_W, k * b_sup * c0_factor * (1 + 1e-12)),
        Clause("dt_bound", sup_dt, k * db_sup * c0_factor * (1 + 1e-12)),
        Clause("dxdy_bound", jx + jy, c1_factor * b_sup * (1 + 1e-12)),
        Clause("primitive", prim, 1e-6),
    )
    info = {"mollifier": {"variant": variant, "c0": c0, "c1": c1, "c2": c2,
                          "c0_target": 1.0, "c1_target": 1.0, "c2_target": 100.0,
                          "cutoff_c1": x1, "cutoff_c2": x2},
            "divergence_by_rho": div, "b_sup": b_sup, "db_sup": db_sup,
            "nominal_dxdy_bound": NOMINAL_C1_SUM * b_sup, "nominal_c0_bound": 2.0 * k * b_sup,
            "nominal_dt_bound": 2.0 * k * db_sup, "psi_b12_sign": psi_b12_sign}
    cert = CertifiedField("franks_local_field", W, {"kappa": k, "T": T, "grid": grid}, clauses, info)
    if raise_on_fail and not cert.passed:
        raise CertificateError(cert)
    return cert
