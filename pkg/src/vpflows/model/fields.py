"""Flow-box and trigonometric model fields, plus the cat-map suspension model."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Trig2D:
    """Finite trigonometric sum on T^2.

    ``value(u, v) = const + sum_j a_j cos(2 pi (k_j u + l_j v)) + b_j sin(2 pi (k_j u + l_j v))``
    with integer frequency pairs ``(k_j, l_j)``.
    """

    const: float = 0.0
    terms: tuple[tuple[int, int, float, float], ...] = ()

    def __post_init__(self):
        clean = []
        for k, l, a, b in self.terms:
            if int(k) != k or int(l) != l:
                raise ValueError(f"frequencies must be integers, got ({k}, {l})")
            clean.append((int(k), int(l), float(a), float(b)))
        object.__setattr__(self, "terms", tuple(clean))
        object.__setattr__(self, "const", float(self.const))

    def __call__(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        out = np.full(np.broadcast(u, v).shape, self.const)
        for k, l, a, b in self.terms:
            ph = TWO_PI * (k * u + l * v)
            if a:
                out = out + a * np.cos(ph)
            if b:
                out = out + b * np.sin(ph)
        return out

    def grad(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        shape = np.broadcast(u, v).shape
        du = np.zeros(shape)
        dv = np.zeros(shape)
        for k, l, a, b in self.terms:
            ph = TWO_PI * (k * u + l * v)
            d = TWO_PI * (-a * np.sin(ph) + b * np.cos(ph))
            du = du + k * d
            dv = dv + l * d
        return du, dv

    @property
    def mean(self) -> float:
        """Lebesgue mean over T^2 (zero-frequency terms included)."""
        return self.const + sum(a for k, l, a, b in self.terms if k == 0 and l == 0)

    def lipschitz_bound(self) -> float:
        return sum(TWO_PI * np.hypot(k, l) * np.hypot(a, b) for k, l, a, b in self.terms)

    def sup_bound(self) -> float:
        return abs(self.const) + sum(np.hypot(a, b) for k, l, a, b in self.terms)

    def scale(self, s: float) -> "Trig2D":
        return Trig2D(s * self.const, tuple((k, l, s * a, s * b) for k, l, a, b in self.terms))

    def shift(self, c: float) -> "Trig2D":
        return Trig2D(self.const + c, self.terms)

    def compose_linear(self, M) -> "Trig2D":
        """``self o M`` for an integer matrix M: frequency vector w maps to M^T w."""
        M = np.asarray(M, dtype=np.int64)
        terms = []
        for k, l, a, b in self.terms:
            w = M.T @ np.array([k, l])
            terms.append((int(w[0]), int(w[1]), a, b))
        return Trig2D(self.const, tuple(terms))

    def min_lower_bound(self, grid: int = 256) -> float:
        """Grid minimum minus Lipschitz slack: a certified lower bound on T^2."""
        g = np.arange(grid) / grid
        U, V = np.meshgrid(g, g, indexing="ij")
        return float(np.min(self(U, V))) - self.lipschitz_bound() * (np.sqrt(2) / 2) / grid

    def to_dict(self) -> dict:
        return {"const": self.const, "terms": [list(t) for t in self.terms]}


@dataclass(frozen=True)
class TrigField3T:
    """Divergence-free field (f(y, z), g(x, z), h(x, y)) on T^3.

    Each component is a :class:`Trig2D` in the two variables it depends on, so
    the divergence vanishes identically.
    """

    fx: Trig2D
    fy: Trig2D
    fz: Trig2D

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        x, y, z = p[..., 0], p[..., 1], p[..., 2]
        return np.stack([self.fx(y, z), self.fy(x, z), self.fz(x, y)], axis=-1)

    def jacobian(self, p):
        """Analytic Jacobian ``J[..., i, j] = d comp_i / d x_j``."""
        p = np.asarray(p, dtype=float)
        x, y, z = p[..., 0], p[..., 1], p[..., 2]
        J = np.zeros(p.shape[:-1] + (3, 3))
        J[..., 0, 1], J[..., 0, 2] = self.fx.grad(y, z)
        J[..., 1, 0], J[..., 1, 2] = self.fy.grad(x, z)
        J[..., 2, 0], J[..., 2, 1] = self.fz.grad(x, y)
        return J

    def divergence(self, p):
        return np.trace(self.jacobian(p), axis1=-2, axis2=-1)

    def scale(self, s: float) -> "TrigField3T":
        return TrigField3T(self.fx.scale(s), self.fy.scale(s), self.fz.scale(s))

    def permute(self, perm: tuple[int, int, int]) -> "TrigField3T":
        """Pushforward by the coordinate permutation ``P: x_i -> x_perm[i]``.

        New component ``perm[i]`` is old component ``i`` evaluated at the
        pulled-back point; each component keeps its two-variable shape.
        """
        perm = tuple(int(v) for v in perm)
        if sorted(perm) != [0, 1, 2]:
            raise ValueError(f"not a permutation: {perm}")
        old = (self.fx, self.fy, self.fz)
        others = {0: (1, 2), 1: (0, 2), 2: (0, 1)}
        new = [None, None, None]
        for i in range(3):
            j = perm[i]
            # old comp i depends on old coords (u, v) = others[i]; these land at perm[u], perm[v]
            u, v = others[i]
            pu, pv = perm[u], perm[v]
            comp = old[i]
            if (pu, pv) != others[j]:
                # the target ordering is swapped: exchange the roles of the two variables
                comp = Trig2D(comp.const, tuple((l, k, a, b) for k, l, a, b in comp.terms))
            new[j] = comp
        return TrigField3T(*new)

    def to_dict(self) -> dict:
        return {"fx": self.fx.to_dict(), "fy": self.fy.to_dict(), "fz": self.fz.to_dict()}


def abc_sine_field() -> TrigField3T:
    """(sin 2 pi y, sin 2 pi z, sin 2 pi x)."""
    return TrigField3T(Trig2D(0.0, ((1, 0, 0.0, 1.0),)),
                       Trig2D(0.0, ((0, 1, 0.0, 1.0),)),
                       Trig2D(0.0, ((1, 0, 0.0, 1.0),)))


@dataclass(frozen=True)
class FlowBoxField:
    """Flow box ``[-1, 1]^2 x [-delta, delta]`` with X = d/dz and mu = dx^dy^dz."""

    delta: float = 1.0

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError("flow box half-thickness must be positive")

    @property
    def box(self):
        return ((-1.0, 1.0), (-1.0, 1.0), (-self.delta, self.delta))

    def base_field(self, x, y, z):
        x = np.asarray(x, dtype=float)
        return np.zeros(x.shape), np.zeros(x.shape), np.ones(np.broadcast(x, y, z).shape)


@dataclass(frozen=True)
class CatSuspension:
    """Suspension of a hyperbolic toral automorphism under a positive roof on T^2."""

    M: tuple[tuple[int, int], tuple[int, int]] = ((2, 1), (1, 1))
    roof: Trig2D = field(default_factory=lambda: Trig2D(1.0))

    def __post_init__(self):
        M = np.asarray(self.M)
        if M.shape != (2, 2) or not np.all(M == np.round(M)):
            raise ValueError("base matrix must be a 2x2 integer matrix")
        Mi = tuple(tuple(int(v) for v in row) for row in M)
        object.__setattr__(self, "M", Mi)
        det = Mi[0][0] * Mi[1][1] - Mi[0][1] * Mi[1][0]
        if det != 1:
            raise ValueError(f"base matrix must have determinant 1, got {det}")
        if abs(Mi[0][0] + Mi[1][1]) <= 2:
            raise ValueError("base matrix is not hyperbolic (|trace| <= 2)")
        if not self.roof.min_lower_bound() > 0:
            raise ValueError("roof function must be positive on T^2")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.M, dtype=np.int64)

    @property
    def dominant_eigenvalue(self) -> float:
        tr = abs(self.M[0][0] + self.M[1][1])
        return (tr + np.sqrt(tr * tr - 4.0)) / 2.0

    def with_roof(self, roof: Trig2D) -> "CatSuspension":
        return CatSuspension(self.M, roof)

    def to_dict(self) -> dict:
        return {"M": [list(r) for r in self.M], "roof": self.roof.to_dict()}
