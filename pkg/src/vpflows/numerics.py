"""Shared numeric kernels: quadrature, RK4 flows, finite-difference Jacobians, grid sup-norms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

DEFAULT_TOL = 1e-10
DEFAULT_FD_STEP = 1e-4


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of subdivision depth."""

    def __init__(self, message: str, worst_interval: tuple[float, float], estimate: float):
        super().__init__(message)
        self.worst_interval = worst_interval
        self.estimate = estimate


class OdeError(RuntimeError):
    def __init__(self, message: str, last_finite_time: float):
        super().__init__(message)
        self.last_finite_time = last_finite_time


@dataclass(frozen=True)
class QuadratureSpec:
    tol: float = DEFAULT_TOL
    max_depth: int = 30

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"quadrature tolerance must be positive, got {self.tol}")
        if not 1 <= self.max_depth <= 40:
            raise ValueError(f"max_depth must lie in [1, 40], got {self.max_depth}")


def quad1d(f: Callable[[np.ndarray], np.ndarray], lo: float, hi: float,
           spec: QuadratureSpec | None = None, initial_panels: int = 8) -> float:
    """Adaptive Simpson quadrature of a vectorized function on [lo, hi].

    All active panels of one refinement level are evaluated in a single call
    to ``f``, so ``f`` must accept and return numpy arrays.  Accepted panels
    carry the usual Richardson correction ``(S2 - S1) / 15``.
    """
    spec = spec or QuadratureSpec()
    if hi == lo:
        return 0.0
    sign = 1.0
    if hi < lo:
        lo, hi, sign = hi, lo, -1.0

    def ev(x):
        return np.broadcast_to(np.asarray(f(x), dtype=float), np.shape(x)).astype(float)

    edges = np.linspace(lo, hi, initial_panels + 1)
    a, b = edges[:-1], edges[1:]
    m = 0.5 * (a + b)
    vals = ev(np.concatenate([a, m, b]))
    n = len(a)
    fa, fm, fb = vals[:n], vals[n:2 * n], vals[2 * n:]
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    tol = np.full(n, spec.tol / initial_panels)

    total = 0.0
    eps = np.finfo(float).eps
    for depth in range(spec.max_depth + 1):
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        v = ev(np.concatenate([lm, rm]))
        flm, frm = v[:len(a)], v[len(a):]
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        two = left + right
        err = np.abs(two - whole)
        floor = 50.0 * eps * np.abs(two)
        ok = err <= 15.0 * np.maximum(tol, floor)
        total += float(np.sum(two[ok] + (two[ok] - whole[ok]) / 15.0))
        if np.all(ok):
            return sign * total
        bad = ~ok
        if depth == spec.max_depth:
            worst = int(np.argmax(np.where(bad, err, -1.0)))
            estimate = total + float(np.sum(two[bad]))
            raise QuadratureError(
                f"adaptive Simpson exhausted depth {spec.max_depth}; worst interval "
                f"[{a[worst]:.6g}, {b[worst]:.6g}] with error estimate {err[worst]:.3g}",
                (float(a[worst]), float(b[worst])), sign * estimate)
        a_b, m_b, b_b = a[bad], m[bad], b[bad]
        a = np.concatenate([a_b, m_b])
        b = np.concatenate([m_b, b_b])
        fa_new = np.concatenate([fa[bad], fm[bad]])
        fb_new = np.concatenate([fm[bad], fb[bad]])
        fm = np.concatenate([flm[bad], frm[bad]])
        whole = np.concatenate([left[bad], right[bad]])
        tol = np.concatenate([tol[bad], tol[bad]]) / 2.0
        fa, fb = fa_new, fb_new
        m = 0.5 * (a + b)
    raise AssertionError("unreachable")


def gauss_legendre(n: int, lo: float = -1.0, hi: float = 1.0, panels: int = 1):
    """Composite Gauss-Legendre nodes and weights on [lo, hi]."""
    x, w = np.polynomial.legendre.leggauss(n)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def tensor_quad(f: Callable[..., np.ndarray], box: Sequence[tuple[float, float]],
                n: int = 64, panels: int = 4) -> float:
    """Tensor-product composite Gauss-Legendre integral of ``f(*coords)`` over a box."""
    rules = [gauss_legendre(n, lo, hi, panels) for lo, hi in box]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    weight = rules[0][1]
    for r in rules[1:]:
        weight = np.multiply.outer(weight, r[1])
    return float(np.sum(np.asarray(f(*grids)) * weight))


@dataclass(frozen=True)
class OdePath:
    times: np.ndarray
    states: np.ndarray
    step: float
    order: int = 4
    method: str = "rk4"

    def __post_init__(self):
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("time grid must be strictly increasing")

    @property
    def endpoint(self) -> np.ndarray:
        return self.states[-1]


def flow_rk4(field: Callable[[float, np.ndarray], np.ndarray], x0, T: float,
             steps: int) -> OdePath:
    """Classical fixed-step RK4 for ``x' = field(t, x)`` on [0, T]."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    x = np.array(x0, dtype=float)
    dt = T / steps
    states = np.empty((steps + 1,) + x.shape)
    states[0] = x
    t = 0.0
    for k in range(steps):
        k1 = np.asarray(field(t, x), dtype=float)
        k2 = np.asarray(field(t + dt / 2, x + dt / 2 * k1), dtype=float)
        k3 = np.asarray(field(t + dt / 2, x + dt / 2 * k2), dtype=float)
        k4 = np.asarray(field(t + dt, x + dt * k3), dtype=float)
        x_new = x + dt / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not np.all(np.isfinite(x_new)):
            raise OdeError(f"non-finite state after t={t:.6g}", t)
        x = x_new
        t = (k + 1) * dt
        states[k + 1] = x
    times = np.linspace(0.0, T, steps + 1)
    return OdePath(times=times, states=states, step=dt)


def jacobian_fd(field: Callable[[np.ndarray], np.ndarray], point, h: float = DEFAULT_FD_STEP) -> np.ndarray:
    """Central-difference Jacobian ``J[i, j] = d field_i / d x_j``."""
    if not 1e-6 <= h <= 1e-3:
        raise ValueError(f"finite-difference step must lie in [1e-6, 1e-3], got {h}")
    p = np.asarray(point, dtype=float)
    n = p.size
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        cols.append((np.asarray(field(p + e), float) - np.asarray(field(p - e), float)) / (2 * h))
    return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class GridSup:
    value: float
    spacing: tuple[float, ...]
    argmax: tuple[float, ...] = field(default=())

    def __float__(self):
        return self.value


def grid_sup(f: Callable[..., np.ndarray], box: Sequence[tuple[float, float]],
             resolution: int | Sequence[int] = 256) -> GridSup:
    """Max of |f| over a closed tensor grid, with the spacing kept for slack estimates."""
    if np.isscalar(resolution):
        resolution = [int(resolution)] * len(box)
    if min(resolution) < 64:
        raise ValueError("grid_sup needs at least 64 points per axis")
    axes = [np.linspace(lo, hi, r) for (lo, hi), r in zip(box, resolution)]
    grids = np.meshgrid(*axes, indexing="ij")
    vals = np.abs(np.broadcast_to(np.asarray(f(*grids), dtype=float), grids[0].shape))
    idx = np.unravel_index(int(np.argmax(vals)), vals.shape)
    spacing = tuple(float(ax[1] - ax[0]) for ax in axes)
    return GridSup(float(vals[idx]), spacing, tuple(float(g[idx]) for g in grids))


def wrap_angle(d):
    """Map angle differences to (-pi, pi]."""
    return (np.asarray(d) + np.pi) % (2 * np.pi) - np.pi
