"""Local functionals from hyperbolic zeros (S) and short periodic orbits (P_min)."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..entropy.core import fixed_point_count, periodic_points
from ..model.fields import CatSuspension, TrigField3T

ZERO_TOL = 1e-10
DEDUP = 1e-6
HYPERBOLIC_TOL = 1e-8
MAX_ORDER = 10


class NonHyperbolicError(ValueError):
    pass


class PartialResultError(RuntimeError):
    def __init__(self, message: str, best):
        super().__init__(message)
        self.best = best


def char_poly(J: np.ndarray) -> tuple[float, float, float]:
    """``(tr, c2, det)`` with ``det(l I - J) = l^3 - tr l^2 + c2 l - det``."""
    tr = float(np.trace(J))
    c2 = float(J[0, 0] * J[1, 1] - J[0, 1] * J[1, 0] + J[0, 0] * J[2, 2] - J[0, 2] * J[2, 0]
               + J[1, 1] * J[2, 2] - J[1, 2] * J[2, 1])
    return tr, c2, float(np.linalg.det(J))


def cubic_roots(b: float, c: float, d: float) -> np.ndarray:
    """Roots of ``l^3 + b l^2 + c l + d`` by Cardano, each polished by Newton steps."""
    p = c - b * b / 3.0
    q = 2.0 * b ** 3 / 27.0 - b * c / 3.0 + d
    disc = complex(q * q / 4.0 + p ** 3 / 27.0)
    s = np.sqrt(disc)
    u3 = -q / 2.0 + s
    if abs(u3) < abs(-q / 2.0 - s):
        u3 = -q / 2.0 - s
    omega = np.exp(2j * np.pi / 3.0)
    if abs(u3) == 0.0:
        ys = np.zeros(3, dtype=complex)
    else:
        u = u3 ** (1.0 / 3.0)
        ys = np.array([omega ** k * u - p / (3.0 * omega ** k * u) for k in range(3)])
    roots = ys - b / 3.0
    for _ in range(2):
        f = ((roots + b) * roots + c) * roots + d
        df = (3.0 * roots + 2.0 * b) * roots + c
        step = np.where(np.abs(df) > 0, f / np.where(np.abs(df) > 0, df, 1.0), 0.0)
        roots = roots - step
    return roots


def eigenvalues(J: np.ndarray) -> np.ndarray:
    """Eigenvalues of a 3x3 matrix from its characteristic cubic, sorted by (real, imag)."""
    tr, c2, det = char_poly(J)
    roots = cubic_roots(-tr, c2, -det)
    return np.array(sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12))))


@dataclass(frozen=True)
class ZeroRecord:
    location: tuple[float, float, float]
    jacobian: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray
    hyperbolic: bool
    residual: float

    @property
    def re2(self) -> float:
        return float(np.sum(self.eigenvalues.real ** 2))

    def to_dict(self) -> dict:
        return {"location": list(self.location), "hyperbolic": self.hyperbolic, "residual": self.residual,
                "eigenvalues": [[float(z.real), float(z.imag)] for z in self.eigenvalues], "re2": self.re2}


def _torus_dist(a: np.ndarray, b: np.ndarray) -> float:
    d = np.abs(a - b) % 1.0
    return float(np.max(np.minimum(d, 1.0 - d)))


def find_zeros(field: TrigField3T, seed_grid: int = 16, tol: float = ZERO_TOL,
               max_iter: int = 60) -> list[ZeroRecord]:
    """Newton from a ``seed_grid^3`` lattice of seeds; non-converging seeds are dropped."""
    if seed_grid < 16:
        raise ValueError("seed grid must be at least 16 per axis")
    g = np.arange(seed_grid) / seed_grid
    x = np.stack(np.meshgrid(g, g, g, indexing="ij"), -1).reshape(-1, 3)
    alive = np.ones(len(x), dtype=bool)
    for _ in range(max_iter):
        Fv = field(x)
        J = field.jacobian(x)
        det = np.linalg.det(J)
        done = np.max(np.abs(Fv), axis=1) <= tol
        # a singular Jacobian kills a seed only while it is still away from a zero;
        # converged seeds freeze so degenerate zeros are kept and flagged later
        alive &= (np.abs(det) > 1e-14) | done
        alive &= np.all(np.isfinite(x), axis=1)
        move = alive & (np.abs(det) > 1e-14)
        Jsafe = np.where(move[:, None, None], J, np.eye(3))
        step = np.linalg.solve(Jsafe, Fv[..., None])[..., 0]
        step = np.where(move[:, None], step, 0.0)
        # damp very long steps; the field is 1-periodic so half a cell is already far
        norm = np.max(np.abs(step), axis=1)
        step = step * np.minimum(1.0, 0.25 / np.maximum(norm, 1e-300))[:, None]
        x = (x - step) % 1.0
        if np.all(np.max(np.abs(step[alive]), axis=1, initial=0.0) < 1e-15):
            break
    res = np.max(np.abs(field(x)), axis=1)
    good = alive & (res <= tol)
    # cluster representatives: smallest residual first, then seed order
    order = np.lexsort((np.arange(len(x)), res))
    found: list[np.ndarray] = []
    for i in order:
        if good[i] and not any(_torus_dist(x[i], q) < DEDUP for q in found):
            found.append(x[i])
    records = []
    for p in found:
        p = np.where(np.abs(p - 1.0) < DEDUP, 0.0, p)
        p = np.where(np.abs(p) < 1e-14, 0.0, p)
        J = field.jacobian(p)
        ev = eigenvalues(J)
        scale = max(1.0, float(np.max(np.abs(J))))
        hyp = bool(np.all(np.abs(ev.real) > HYPERBOLIC_TOL * scale))
        records.append(ZeroRecord(tuple(float(v) for v in p), J, ev, hyp, float(np.max(np.abs(field(p))))))
    records.sort(key=lambda r: tuple(round(v, 9) for v in r.location))
    return records


@dataclass(frozen=True)
class SValue:
    value: float
    zero_count: int
    no_zeros: bool

    def __float__(self):
        return self.value


def s_functional(zeros: list[ZeroRecord]) -> SValue:
    """Sum of squared real parts of all eigenvalues over all zeros."""
    if not zeros:
        return SValue(0.0, 0, True)
    bad = [z.location for z in zeros if not z.hyperbolic]
    if bad:
        raise NonHyperbolicError(f"non-hyperbolic zero(s) at {bad}; the functional is undefined")
    return SValue(float(sum(z.re2 for z in zeros)), len(zeros), False)


def _minimal_periods(pts) -> np.ndarray:
    """Least ``k | n`` with ``M^k x = x`` for each fixed point of ``M^n``."""
    n = pts.n
    per = np.full(pts.count, n, dtype=np.int64)
    undecided = np.ones(pts.count, dtype=bool)
    for k, nums in enumerate(pts.orbit_numerators()):
        if k == 0:
            continue
        back = np.all(nums == pts.numerators, axis=1) & undecided
        per[back] = k
        undecided &= ~back
    return per


def _mobius(n: int) -> int:
    m, k, p = n, 1, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            k = -k
        p += 1
    return -k if m > 1 else k


@dataclass(frozen=True)
class MinPeriod:
    value: float
    order: int
    point: tuple[float, float]
    certified_at: int
    roof_lower_bound: float
    table: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"value": self.value, "order": self.order, "point": list(self.point),
                "certified_at": self.certified_at, "roof_lower_bound": self.roof_lower_bound,
                "orbits": list(self.table)}


def min_period(model: CatSuspension, n_max: int = MAX_ORDER) -> MinPeriod:
    """Shortest primitive periodic orbit of the suspension flow.

    Orders are scanned upward; once ``(n + 1) * min(roof) > best`` no longer
    orbit can be shorter, which certifies the minimum.
    """
    if not 1 <= n_max <= MAX_ORDER:
        raise ValueError(f"n_max must lie in [1, {MAX_ORDER}]")
    lb = model.roof.min_lower_bound()
    best = (np.inf, 0, (np.nan, np.nan))
    table = []
    for n in range(1, n_max + 1):
        pts = periodic_points(model.M, n)
        per = _minimal_periods(pts)
        prim = per == n
        expected_prim = sum(_mobius(n // d) * fixed_point_count(model.M, d) for d in range(1, n + 1) if n % d == 0)
        row = {"order": n, "primitive_points": int(prim.sum()), "orbits": int(prim.sum()) // n,
               "count_consistent": bool(int(prim.sum()) == expected_prim)}
        if np.any(prim):
            sums = np.zeros(pts.count)
            for nums in pts.orbit_numerators():
                u = nums / pts.denominator
                sums += model.roof(u[:, 0], u[:, 1])
            sums = np.where(prim, sums, np.inf)
            i = int(np.argmin(sums))
            row["min_period"] = float(sums[i])
            if sums[i] < best[0]:
                best = (float(sums[i]), n, tuple(float(v) for v in pts.points[i]))
        table.append(row)
        if (n + 1) * lb > best[0]:
            return MinPeriod(best[0], best[1], best[2], n, lb, tuple(table))
    raise PartialResultError(
        f"pruning bound (n+1) min(roof) > best not reached by order {n_max}; best candidate {best[0]:.6g}",
        MinPeriod(best[0], best[1], best[2], -1, lb, tuple(table)))
