"""Derivative of entropy under time changes, and variance along suspension orbits."""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .core import (DEFAULT_ORDER, _as_int_matrix, _cached_points, birkhoff_sums, entropy_from_sums,
                   torus_mean)

FD_STEP = 1e-3
XTOL = 1e-12


@dataclass(frozen=True)
class DerivativeReport:
    en: float
    mean_f: float
    fd_slope: float
    predicted_slope: float
    eps: tuple[float, ...]
    h: tuple[float, ...]
    quad_coeffs: tuple[float, float, float]
    quad_residual: float
    order: int

    @property
    def gap(self) -> float:
        return self.fd_slope - self.predicted_slope

    def to_dict(self) -> dict:
        return {"En": self.en, "mean_f": self.mean_f, "fd_slope": self.fd_slope,
                "predicted_slope": self.predicted_slope, "gap": self.gap,
                "quadratic_fit": {"c0": self.quad_coeffs[0], "c1": self.quad_coeffs[1],
                                  "c2": self.quad_coeffs[2], "max_residual": self.quad_residual},
                "order": self.order}

    def series_csv(self) -> str:
        buf = io.StringIO()
        buf.write("eps,h\n")
        for e, h in zip(self.eps, self.h):
            buf.write("%.17g,%.17g\n" % (e, h))
        return buf.getvalue()


def entropy_derivative_check(M, f, eps_grid=None, n: int = DEFAULT_ORDER,
                             fd_step: float = FD_STEP) -> DerivativeReport:
    """``h(eps)`` for roofs ``1 - eps f`` against the first-derivative formula ``En * int f``.

    ``f`` is a scalar or a function on T^2 (lifted to the suspension as
    constant along fibers).  The quadratic fit over ``eps_grid`` gauges
    smoothness.
    """
    if eps_grid is None:
        eps_grid = np.linspace(-0.05, 0.05, 11)
    eps_grid = np.asarray(eps_grid, dtype=float)
    if np.max(np.abs(eps_grid)) > 0.1:
        raise ValueError("eps must satisfy |eps| <= 0.1")
    pts = _cached_points(_as_int_matrix(M), n)
    if np.isscalar(f):
        c = float(f)
        Sf = np.full(pts.count, n * c)
        mean_f = c
    else:
        Sf = birkhoff_sums(pts, f)
        mean_f = torus_mean(f)

    def h(e):
        R = n - e * Sf
        if np.min(R) <= 0:
            raise ValueError(f"roof 1 - eps f is not positive at eps = {e}")
        return entropy_from_sums(R, n, XTOL).value

    en = h(0.0)
    fd = (h(fd_step) - h(-fd_step)) / (2.0 * fd_step)
    hs = np.array([h(e) for e in eps_grid])
    coeffs = np.polyfit(eps_grid, hs, 2)
    resid = float(np.max(np.abs(np.polyval(coeffs, eps_grid) - hs)))
    c2, c1, c0 = (float(v) for v in coeffs)
    return DerivativeReport(en, mean_f, fd, en * mean_f, tuple(float(e) for e in eps_grid),
                            tuple(float(v) for v in hs), (c0, c1, c2), resid, n)


@dataclass(frozen=True)
class VarianceEstimate:
    value: float
    stderr: float
    lag_max: int
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {"value": self.value, "stderr": self.stderr, "lag_max": self.lag_max,
                "samples": self.samples, "seed": self.seed}


def variance_estimate(M, f, lag_max: int = 8, sample_count: int = 200_000, seed: int = 0) -> VarianceEstimate:
    """Truncated lag integral ``int_{-L}^{L} E[F . F o phi_tau] d tau`` on the unit-roof suspension.

    ``F(x, s) = f(x) - int f`` is constant along fibers.  Each sample
    ``(x, s)`` contributes the exact integral of the piecewise-constant
    product over ``tau in [-L, L]``; the mean over samples estimates the
    variance and its standard error comes from the same per-sample values.
    """
    M = np.array(_as_int_matrix(M), dtype=float)
    Minv = np.linalg.inv(M)
    rng = np.random.default_rng(seed)
    x = rng.random((sample_count, 2))
    s = rng.random(sample_count)
    if np.isscalar(f):
        return VarianceEstimate(0.0, 0.0, lag_max, sample_count, seed)
    mean = torus_mean(f)
    F = lambda p: np.asarray(f(p[:, 0], p[:, 1]), dtype=float) - mean  # noqa: E731
    L = int(lag_max)
    base = F(x)
    acc = np.zeros(sample_count)
    for direction, A in ((1, M), (-1, Minv)):
        p = x.copy()
        for k in range(0, L + 1):
            if k > 0:
                p = (p @ A.T) % 1.0
            elif direction < 0:
                continue
            kk = direction * k
            # time spent in fiber kk for tau in [-L, L]
            length = np.clip(np.minimum(kk + 1 - s, L) - np.maximum(kk - s, -L), 0.0, None)
            acc += F(p) * length
    q = base * acc
    return VarianceEstimate(float(np.mean(q)), float(np.std(q, ddof=1) / np.sqrt(sample_count)), L,
                            sample_count, seed)


class OriginBump:
    """Periodic product bump centered at the origin of T^2, normalized so that ``f(0) = 1``
    and ``int f = 0`` (separates Lebesgue from the fixed-point measure)."""

    def __init__(self, half_width: float = 0.15):
        from ..model.profiles import BumpProfile1D
        self.b = BumpProfile1D(0.0, half_width)
        g0 = 1.0
        gbar = self.b.integral() ** 2
        self.scale = 1.0 / (g0 - gbar)
        self.gbar = gbar
        self.mean = 0.0

    def _g(self, u, v):
        du = (np.asarray(u) + 0.5) % 1.0 - 0.5
        dv = (np.asarray(v) + 0.5) % 1.0 - 0.5
        return self.b(du) * self.b(dv)

    def __call__(self, u, v):
        return (self._g(u, v) - self.gbar) * self.scale
