"""Periodic points, pressure and entropy for suspensions of hyperbolic toral automorphisms."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np

from ..numerics import tensor_quad

COUNT_CAP = 1_000_000
DEFAULT_ORDER = 12


class CountCapError(ValueError):
    pass


class BracketError(ValueError):
    pass


def _as_int_matrix(M) -> tuple[tuple[int, int], tuple[int, int]]:
    M = np.asarray(M)
    if M.shape != (2, 2) or not np.all(M == np.round(M)):
        raise ValueError("expected a 2x2 integer matrix")
    return tuple(tuple(int(v) for v in row) for row in M)


def _matmul(A, B):
    return ((A[0][0] * B[0][0] + A[0][1] * B[1][0], A[0][0] * B[0][1] + A[0][1] * B[1][1]),
            (A[1][0] * B[0][0] + A[1][1] * B[1][0], A[1][0] * B[0][1] + A[1][1] * B[1][1]))


def matrix_power(M, n: int):
    """Exact integer power."""
    M = _as_int_matrix(M)
    R = ((1, 0), (0, 1))
    for _ in range(n):
        R = _matmul(R, M)
    return R


def fixed_point_count(M, n: int) -> int:
    """``|det(M^n - I)|`` in exact integer arithmetic."""
    P = matrix_power(M, n)
    return abs((P[0][0] - 1) * (P[1][1] - 1) - P[0][1] * P[1][0])


def _egcd(a: int, b: int):
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@dataclass(frozen=True)
class PeriodicPointSet:
    """Fixed points of ``M^n`` on T^2 stored as integer numerators over ``denominator``."""

    M: tuple
    n: int
    numerators: np.ndarray = field(repr=False)
    denominator: int
    expected: int

    @property
    def count(self) -> int:
        return len(self.numerators)

    @property
    def points(self) -> np.ndarray:
        return self.numerators / self.denominator

    def orbit_numerators(self):
        """Yield the integer numerators of ``M^k x`` for ``k = 0 .. n-1``."""
        M = np.array(self.M, dtype=np.int64)
        cur = self.numerators.copy()
        D = self.denominator
        for _ in range(self.n):
            yield cur
            cur = (cur @ M.T) % D

    def max_residual(self) -> float:
        """``max |M^n x - x|`` mod 1, from exact integer numerators.

        Applying ``M^n`` in floating point would amplify round-off by ``|M^n|``;
        the points are rational, so the exact residual is the meaningful one.
        """
        P = np.array(matrix_power(self.M, self.n), dtype=object)
        D = self.denominator
        moved = (self.numerators.astype(object) @ P.T) % D
        d = ((moved - self.numerators.astype(object)) % D).astype(np.int64)
        return float(np.max(np.minimum(d, D - d)) / D)


def periodic_points(M, n: int, cap: int = COUNT_CAP) -> PeriodicPointSet:
    """All ``x`` in T^2 with ``M^n x = x``: the lattice ``adj(M^n - I) Z^2 / D`` mod 1."""
    M = _as_int_matrix(M)
    if n < 1:
        raise ValueError("order must be >= 1")
    P = matrix_power(M, n)
    B = ((P[0][0] - 1, P[0][1]), (P[1][0], P[1][1] - 1))
    D = abs(B[0][0] * B[1][1] - B[0][1] * B[1][0])
    if D == 0:
        raise ValueError("M^n - I is singular; M is not hyperbolic")
    if D > cap:
        raise CountCapError(f"|det(M^{n} - I)| = {D} exceeds the count cap {cap}")
    adj = ((B[1][1], -B[0][1]), (-B[1][0], B[0][0]))
    p, q = adj[0][0], adj[1][0]
    r, s = adj[0][1], adj[1][1]
    g1, u, v = _egcd(p, r)
    g2 = u * q + v * s
    g3 = abs(D // g1)
    g2 %= g3
    # lattice basis (g1, g2), (0, g3) contains D Z^2 and has index D
    i = np.arange(g3, dtype=np.int64)
    j = np.arange(g1, dtype=np.int64)
    a = np.repeat((i * g1) % D, g1)
    b = (np.repeat(i * g2, g1) + np.tile(j * g3, g3)) % D
    nums = np.column_stack([a, b])
    pts = PeriodicPointSet(M, n, nums, D, fixed_point_count(M, n))
    # exact integer verification of M^n x = x mod D
    Pn = np.array(P, dtype=object)
    moved = (nums.astype(object) @ Pn.T) % D
    if not np.array_equal(moved.astype(np.int64), nums):
        raise AssertionError("periodic-point lattice failed the exact fixed-point check")
    return pts


def birkhoff_sums(pts: PeriodicPointSet, phi: Callable) -> np.ndarray:
    """``sum_{k<n} phi(M^k x)`` for every periodic point."""
    total = np.zeros(pts.count)
    for nums in pts.orbit_numerators():
        x = nums / pts.denominator
        total += np.asarray(phi(x[:, 0], x[:, 1]), dtype=float)
    return total


def _logsumexp(v: np.ndarray) -> float:
    m = float(np.max(v))
    return m + float(np.log(np.sum(np.exp(v - m))))


def pressure_from_sums(sums: np.ndarray, n: int) -> float:
    return _logsumexp(sums) / n


def pressure(M, phi: Callable | float, n: int = DEFAULT_ORDER) -> float:
    """``(1/n) log sum_{x in Fix(M^n)} exp(S_n phi(x))`` with a log-sum-exp shift."""
    pts = _cached_points(_as_int_matrix(M), n)
    if np.isscalar(phi):
        c = float(phi)
        return (np.log(pts.count) + n * c) / n
    return pressure_from_sums(birkhoff_sums(pts, phi), n)


@lru_cache(maxsize=16)
def _cached_points(M, n: int) -> PeriodicPointSet:
    return periodic_points(M, n)


@dataclass(frozen=True)
class EntropyResult:
    value: float
    order: int
    bracket: tuple[float, float]
    roof: str

    @property
    def bracket_width(self) -> float:
        return self.bracket[1] - self.bracket[0]


def _roof_fn(roof):
    if np.isscalar(roof):
        c = float(roof)
        return (lambda u, v: np.full(np.shape(u), c)), f"const {c:g}"
    desc = repr(roof.to_dict()) if hasattr(roof, "to_dict") else getattr(roof, "__name__", "callable")
    return roof, desc


def entropy_from_sums(R: np.ndarray, n: int, xtol: float = 1e-6, lo: float = 0.0, hi: float = 3.0,
                      desc: str = "") -> EntropyResult:
    """Bisection for the root ``h`` of ``h -> pressure(-h r)`` given roof Birkhoff sums ``R``."""
    if np.min(R) <= 0:
        raise ValueError("roof Birkhoff sums must be positive")
    P = lambda h: _logsumexp(-h * R) / n  # noqa: E731
    plo, phi_ = P(lo), P(hi)
    if not (plo > 0 > phi_):
        raise BracketError(f"no sign change of the pressure on [{lo}, {hi}]: P = ({plo:.3g}, {phi_:.3g})")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if P(mid) > 0:
            lo = mid
        else:
            hi = mid
    return EntropyResult(0.5 * (lo + hi), n, (lo, hi), desc)


def entropy_suspension(M, roof, n: int = DEFAULT_ORDER, xtol: float = 1e-6) -> EntropyResult:
    """Topological entropy of the suspension flow under ``roof`` (scalar or function on T^2)."""
    fn, desc = _roof_fn(roof)
    pts = _cached_points(_as_int_matrix(M), n)
    res = entropy_from_sums(birkhoff_sums(pts, fn), n, xtol, desc=desc)
    if not res.value > 0:
        raise AssertionError("entropy of an Anosov suspension must be positive")
    return res


def torus_mean(f: Callable) -> float:
    if hasattr(f, "mean") and not callable(getattr(f, "mean")):
        return float(f.mean)
    return tensor_quad(lambda u, v: f(u, v), [(0.0, 1.0), (0.0, 1.0)], n=48, panels=8)
