"""Minimal exterior calculus on I x T^2 with coordinates (t, x, y).

Forms are dicts mapping an ordered coordinate tuple to a coefficient
callable ``c(t, x, y)``.  Wedge products concatenate monomials; reduction to
the reference volume ``dt^dx^dy`` multiplies by the permutation sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

COORDS = ("t", "x", "y")
Coefficient = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def permutation_sign(order: tuple[str, ...]) -> int:
    """Sign of the permutation sorting ``order`` into (t, x, y) order; 0 on repeats."""
    if len(set(order)) != len(order):
        return 0
    idx = [COORDS.index(c) for c in order]
    sign = 1
    for i in range(len(idx)):
        for j in range(i + 1, len(idx)):
            if idx[i] > idx[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class WedgeTerm:
    """Coefficient times an ordered coordinate monomial, e.g. ``c dx^dt^dy``."""

    coords: tuple[str, ...]
    coeff: Coefficient

    def __post_init__(self):
        bad = [c for c in self.coords if c not in COORDS]
        if bad:
            raise ValueError(f"unknown coordinate(s) {bad}")

    @property
    def sign(self) -> int:
        return permutation_sign(self.coords)

    def reduce(self) -> Coefficient:
        """Coefficient against the sorted monomial (0 when a coordinate repeats)."""
        s, c = self.sign, self.coeff
        if s == 0:
            return _zero
        return c if s == 1 else (lambda t, x, y: -c(t, x, y))


def _zero(t, x, y):
    return np.zeros(np.broadcast(t, x, y).shape)


def _product(c1: Coefficient, c2: Coefficient) -> Coefficient:
    return lambda t, x, y: c1(t, x, y) * c2(t, x, y)


def wedge(a: dict, b: dict) -> list[WedgeTerm]:
    """All monomial products of two forms, unreduced."""
    return [WedgeTerm(ka + kb, _product(ca, cb)) for ka, ca in a.items() for kb, cb in b.items()]


def top_coefficient(terms: list[WedgeTerm]) -> Coefficient:
    """Sum of reduced 3-form terms: the coefficient against ``dt^dx^dy``."""
    live = [w.reduce() for w in terms if len(w.coords) == 3 and w.sign != 0]

    def coeff(t, x, y):
        out = _zero(t, x, y)
        for c in live:
            out = out + c(t, x, y)
        return out
    return coeff


def contract_volume(field: tuple[Coefficient, Coefficient, Coefficient]) -> dict:
    """``iota_X (dt^dx^dy)`` for ``X = (X^t, X^x, X^y)`` as a 2-form."""
    Xt, Xx, Xy = field
    return {("x", "y"): Xt, ("t", "y"): lambda t, x, y: -Xx(t, x, y), ("t", "x"): Xy}


def const_in(f) -> Coefficient:
    """Lift a function of t to a coefficient on (t, x, y)."""
    return lambda t, x, y: np.broadcast_to(np.asarray(f(t), dtype=float), np.broadcast(t, x, y).shape)


def integrate_top(coeff: Coefficient, interval: tuple[float, float], quad_t,
                  torus_points: int = 32) -> float:
    """Integrate a 3-form coefficient over ``interval x T^2``.

    The torus factor uses the uniform periodic rule, exact for trigonometric
    polynomials of degree below ``torus_points``; the t integral is delegated
    to ``quad_t(g, lo, hi)``.
    """
    g = np.arange(torus_points) / torus_points
    X, Y = np.meshgrid(g, g, indexing="ij")

    def along_t(ts):
        ts = np.asarray(ts, dtype=float)
        vals = coeff(ts[:, None, None], X[None], Y[None])
        return np.mean(np.broadcast_to(vals, (ts.size,) + X.shape), axis=(1, 2))
    return float(quad_t(along_t, *interval))
