"""One-dimensional profiles: a closed polynomial + Fourier basis and compactly supported bumps."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from ..numerics import QuadratureSpec, gauss_legendre, quad1d

MAX_DEGREE = 8
MAX_HARMONIC = 32
POSITIVITY_GRID = 2048
TWO_PI = 2.0 * np.pi


class BasisOverflowError(ValueError):
    """A calculus rule would leave the polynomial/Fourier basis."""


def _trim(c) -> tuple[float, ...]:
    c = [float(v) for v in c]
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class ScalarProfile1D:
    """Profile ``const + sum poly[i] t^(i+1) + sum cos[k-1] cos(2 pi k t) + sin[k-1] sin(2 pi k t)``.

    Degree and harmonic caps are enforced at construction; evaluation,
    differentiation and antidifferentiation are exact linear maps on the
    coefficient vectors.
    """

    const: float = 0.0
    poly: tuple[float, ...] = ()
    cos: tuple[float, ...] = ()
    sin: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "const", float(self.const))
        object.__setattr__(self, "poly", _trim(self.poly))
        object.__setattr__(self, "cos", _trim(self.cos))
        object.__setattr__(self, "sin", _trim(self.sin))
        if len(self.poly) > MAX_DEGREE:
            raise BasisOverflowError(f"polynomial degree {len(self.poly)} exceeds cap {MAX_DEGREE}")
        if max(len(self.cos), len(self.sin)) > MAX_HARMONIC:
            raise BasisOverflowError(f"harmonic count exceeds cap {MAX_HARMONIC}")
        if not all(np.isfinite(v) for v in (self.const, *self.poly, *self.cos, *self.sin)):
            raise ValueError("profile coefficients must be finite")

    @classmethod
    def constant(cls, c: float) -> "ScalarProfile1D":
        return cls(const=c)

    @property
    def degree(self) -> int:
        return len(self.poly)

    @property
    def harmonics(self) -> int:
        return max(len(self.cos), len(self.sin))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.full(t.shape, self.const)
        if self.poly:
            out = out + t * np.polynomial.polynomial.polyval(t, self.poly)
        for coeffs, trig in ((self.cos, np.cos), (self.sin, np.sin)):
            for k, a in enumerate(coeffs, start=1):
                if a:
                    out = out + a * trig(TWO_PI * k * t)
        return out

    def derivative(self) -> "ScalarProfile1D":
        const = self.poly[0] if self.poly else 0.0
        poly = [(i + 1) * c for i, c in enumerate(self.poly)][1:]
        cos = [TWO_PI * k * b for k, b in enumerate(self.sin, start=1)]
        sin = [-TWO_PI * k * a for k, a in enumerate(self.cos, start=1)]
        return ScalarProfile1D(const, tuple(poly), tuple(cos), tuple(sin))

    def antiderivative(self, start_value: float = 0.0, origin: float = 0.0) -> "ScalarProfile1D":
        return antiderivative(self, start_value, origin)

    def integral(self, lo: float = 0.0, hi: float = 1.0) -> float:
        P = antiderivative(self)
        return float(P(hi) - P(lo))

    def derivative_bound(self) -> float:
        """Upper bound for sup |p'| on [0, 1] from coefficient magnitudes."""
        d = self.derivative()
        return (abs(d.const) + sum(abs(c) for c in d.poly)
                + sum(abs(c) for c in d.cos) + sum(abs(c) for c in d.sin))

    def is_positive(self, grid: int = POSITIVITY_GRID) -> bool:
        """Grid minimum minus a derivative-bound slack must stay positive."""
        ts = np.linspace(0.0, 1.0, grid)
        slack = self.derivative_bound() * 0.5 / (grid - 1)
        return bool(np.min(self(ts)) - slack > 0.0)

    def __add__(self, other):
        if not isinstance(other, ScalarProfile1D):
            return NotImplemented
        return ScalarProfile1D(self.const + other.const, _padd(self.poly, other.poly),
                               _padd(self.cos, other.cos), _padd(self.sin, other.sin))

    def scale(self, s: float) -> "ScalarProfile1D":
        return ScalarProfile1D(s * self.const, tuple(s * c for c in self.poly),
                               tuple(s * c for c in self.cos), tuple(s * c for c in self.sin))

    def to_dict(self) -> dict:
        return {"const": self.const, "poly": list(self.poly), "cos": list(self.cos), "sin": list(self.sin)}


def _padd(a: Sequence[float], b: Sequence[float]) -> tuple[float, ...]:
    n = max(len(a), len(b))
    a = list(a) + [0.0] * (n - len(a))
    b = list(b) + [0.0] * (n - len(b))
    return tuple(x + y for x, y in zip(a, b))


def antiderivative(p: ScalarProfile1D, start_value: float = 0.0, origin: float = 0.0) -> ScalarProfile1D:
    """Exact antiderivative ``P`` with ``P' = p`` and ``P(origin) = start_value``."""
    if p.poly and p.poly[-1] != 0.0 and len(p.poly) + 1 > MAX_DEGREE:
        raise BasisOverflowError(
            f"antiderivative of degree-{p.degree} profile needs degree {p.degree + 1} > {MAX_DEGREE}")
    poly = [p.const] + [c / (i + 2) for i, c in enumerate(p.poly)]
    cos = [-b / (TWO_PI * k) for k, b in enumerate(p.sin, start=1)]
    sin = [a / (TWO_PI * k) for k, a in enumerate(p.cos, start=1)]
    P = ScalarProfile1D(0.0, tuple(poly), tuple(cos), tuple(sin))
    return ScalarProfile1D(start_value - float(P(origin)), P.poly, P.cos, P.sin)


def smooth_step(s):
    """C-infinity step: 0 for s <= 0, 1 for s >= 1, with ``step(s) + step(1 - s) = 1``."""
    s = np.asarray(s, dtype=float)
    out = np.zeros(s.shape)
    inner = (s > 0) & (s < 1)
    si = s[inner]
    a = np.exp(-1.0 / si)
    b = np.exp(-1.0 / (1.0 - si))
    out[inner] = a / (a + b)
    out[s >= 1] = 1.0
    return out


def smooth_step_derivatives(s):
    """Value, first and second derivative of :func:`smooth_step`."""
    s = np.asarray(s, dtype=float)
    v = smooth_step(s)
    d1 = np.zeros(s.shape)
    d2 = np.zeros(s.shape)
    # exp(-1/s) underflows to exactly 0 below 1e-3, so the derivatives vanish there too
    inner = (s > 1e-3) & (s < 1 - 1e-3)
    si = s[inner]
    # step = 1 / (1 + exp(g)), g = 1/s - 1/(1-s)
    g = 1.0 / si - 1.0 / (1.0 - si)
    gp = -1.0 / si**2 - 1.0 / (1.0 - si) ** 2
    gpp = 2.0 / si**3 - 2.0 / (1.0 - si) ** 3
    sig = v[inner]
    # d/dg [1/(1+e^g)] = -sig(1-sig)
    d1[inner] = -sig * (1 - sig) * gp
    d2[inner] = -sig * (1 - sig) * gpp + (1 - 2 * sig) * sig * (1 - sig) * gp**2
    return v, d1, d2


def _bump_parts(s):
    """exp(1 - 1/(1 - s^2)) and its first two derivatives in s; zero for |s| >= 1."""
    s = np.asarray(s, dtype=float)
    v = np.zeros(s.shape)
    d1 = np.zeros(s.shape)
    d2 = np.zeros(s.shape)
    inner = np.abs(s) < 1
    si = s[inner]
    q = 1.0 - si**2
    e = np.exp(1.0 - 1.0 / q)
    # g = 1 - 1/q, g' = -2s/q^2, g'' = -2/q^2 - 8 s^2/q^3
    gp = -2.0 * si / q**2
    gpp = -2.0 / q**2 - 8.0 * si**2 / q**3
    v[inner] = e
    d1[inner] = e * gp
    d2[inner] = e * (gpp + gp**2)
    return v, d1, d2


@dataclass(frozen=True)
class BumpProfile1D:
    """Smooth compactly supported bump ``amp * exp(1 - 1/(1 - s^2))``, ``s = (t - center)/half_width``."""

    center: float
    half_width: float
    amplitude: float = 1.0

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError("bump half-width must be positive")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.half_width, self.center + self.half_width)

    def _s(self, t):
        return (np.asarray(t, dtype=float) - self.center) / self.half_width

    def __call__(self, t):
        return self.amplitude * _bump_parts(self._s(t))[0]

    def d1(self, t):
        return self.amplitude * _bump_parts(self._s(t))[1] / self.half_width

    def d2(self, t):
        return self.amplitude * _bump_parts(self._s(t))[2] / self.half_width**2

    def derivative(self) -> "DerivedProfile":
        return DerivedProfile(self, 1)

    def scale(self, s: float) -> "BumpProfile1D":
        return BumpProfile1D(self.center, self.half_width, self.amplitude * s)

    @cached_property
    def _unit_mass(self) -> float:
        return quad1d(lambda s: _bump_parts(s)[0], -1.0, 1.0, QuadratureSpec(tol=1e-15, max_depth=40))

    def integral(self, lo: float | None = None, hi: float | None = None) -> float:
        a, b = self.support
        lo = a if lo is None else max(lo, a)
        hi = b if hi is None else min(hi, b)
        if hi <= lo:
            return 0.0
        if lo <= a and hi >= b:
            return self.amplitude * self.half_width * self._unit_mass
        return float(self.cumulative(hi) - self.cumulative(lo))

    def cumulative(self, t):
        """``int_{-inf}^t bump``, vectorized, accurate to ~1e-14 relative."""
        t = np.asarray(t, dtype=float)
        s = np.clip(self._s(t), -1.0, 1.0)
        # Integrate the unit bump on [-1, s] with composite Gauss-Legendre after mapping.
        x, w = gauss_legendre(40, 0.0, 1.0, panels=4)
        lo = -1.0
        nodes = lo + (s[..., None] - lo) * x
        vals = _bump_parts(nodes)[0]
        unit = np.sum(vals * w, axis=-1) * (s - lo)
        return self.amplitude * self.half_width * unit


@dataclass(frozen=True)
class PlateauBump1D:
    """Even smooth cutoff: 1 on |t - center| <= inner, 0 on |t - center| >= outer."""

    center: float
    inner: float
    outer: float

    def __post_init__(self):
        if not 0 <= self.inner < self.outer:
            raise ValueError("plateau bump needs 0 <= inner < outer")

    @property
    def support(self) -> tuple[float, float]:
        return (self.center - self.outer, self.center + self.outer)

    def _u(self, t):
        r = np.abs(np.asarray(t, dtype=float) - self.center)
        return (self.outer - r) / (self.outer - self.inner)

    def __call__(self, t):
        return smooth_step(self._u(t))

    def d1(self, t):
        t = np.asarray(t, dtype=float)
        sgn = np.sign(t - self.center)
        _, d1, _ = smooth_step_derivatives(self._u(t))
        return -sgn * d1 / (self.outer - self.inner)

    def d2(self, t):
        _, _, d2 = smooth_step_derivatives(self._u(t))
        return d2 / (self.outer - self.inner) ** 2

    def integral(self) -> float:
        # step(u) + step(1 - u) = 1 makes each transition contribute half its length.
        return 2.0 * self.inner + (self.outer - self.inner)

    def derivative(self) -> "DerivedProfile":
        return DerivedProfile(self, 1)


@dataclass(frozen=True)
class DerivedProfile:
    """Derivative view of a bump-like profile exposing ``d1``/``d2``."""

    base: object
    order: int

    def __call__(self, t):
        return self.base.d1(t) if self.order == 1 else self.base.d2(t)

    def derivative(self) -> "DerivedProfile":
        if self.order >= 2:
            raise NotImplementedError("only two derivatives are tabulated")
        return DerivedProfile(self.base, self.order + 1)


@dataclass(frozen=True)
class PerturbedProfile:
    """``base + sum_i weight_i * term_i`` with weights merged per term.

    Keeps basis profiles and bump perturbations separate so that repeated
    shifts add weights exactly instead of re-rounding coefficients.
    """

    base: ScalarProfile1D
    terms: tuple[tuple[float, object], ...] = field(default=())

    def add(self, term, weight: float) -> "PerturbedProfile":
        terms = list(self.terms)
        for i, (w, t) in enumerate(terms):
            if t == term:
                terms[i] = (w + weight, t)
                break
        else:
            terms.append((weight, term))
        return PerturbedProfile(self.base, tuple(terms))

    def __call__(self, t):
        out = self.base(t)
        for w, term in self.terms:
            if w:
                out = out + w * term(t)
        return out

    def derivative(self) -> "_SumView":
        return _SumView([(1.0, self.base.derivative())] + [(w, term.derivative()) for w, term in self.terms])

    def integral(self, lo: float = 0.0, hi: float = 1.0) -> float:
        total = self.base.integral(lo, hi)
        for w, term in self.terms:
            if w:
                total += w * term_integral(term, lo, hi)
        return total

    def primitive(self, start_value: float = 0.0, origin: float = 0.0) -> "Primitive":
        return Primitive(self, start_value, origin)


@dataclass(frozen=True)
class _SumView:
    parts: list

    def __call__(self, t):
        out = 0.0
        for w, p in self.parts:
            out = out + w * p(t)
        return out


@dataclass(frozen=True)
class BumpCombination:
    """Finite linear combination of bumps; used for L2 solutions and shift directions."""

    bumps: tuple[BumpProfile1D, ...]

    def __call__(self, t):
        out = np.zeros(np.shape(t))
        for b in self.bumps:
            out = out + b(t)
        return out

    def d1(self, t):
        return sum(b.d1(t) for b in self.bumps)

    def d2(self, t):
        return sum(b.d2(t) for b in self.bumps)

    def derivative(self) -> DerivedProfile:
        return DerivedProfile(self, 1)

    @property
    def support(self) -> tuple[float, float]:
        return (min(b.support[0] for b in self.bumps), max(b.support[1] for b in self.bumps))

    def integral(self, lo: float | None = None, hi: float | None = None) -> float:
        return sum(b.integral(lo, hi) for b in self.bumps)

    def cumulative(self, t):
        return sum(b.cumulative(t) for b in self.bumps)


def term_integral(term, lo: float, hi: float) -> float:
    if isinstance(term, ScalarProfile1D):
        return term.integral(lo, hi)
    return term.integral(lo, hi)


def term_cumulative(term, t, origin: float):
    """``int_origin^t term`` for basis profiles and bump combinations."""
    if isinstance(term, ScalarProfile1D):
        P = antiderivative(term)
        return P(t) - P(origin)
    return term.cumulative(t) - term.cumulative(origin)


@dataclass(frozen=True)
class Primitive:
    """``start_value + int_origin^t p`` for a (possibly perturbed) profile ``p``."""

    p: object
    start_value: float = 0.0
    origin: float = 0.0

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        p = self.p
        if isinstance(p, ScalarProfile1D):
            return antiderivative(p, self.start_value, self.origin)(t)
        out = antiderivative(p.base, self.start_value, self.origin)(t)
        for w, term in p.terms:
            if w:
                out = out + w * term_cumulative(term, t, self.origin)
        return out


def as_perturbed(p) -> PerturbedProfile:
    return p if isinstance(p, PerturbedProfile) else PerturbedProfile(p)


def primitive(p, start_value: float = 0.0, origin: float = 0.0):
    """Exact antiderivative when ``p`` is in the basis, bump-aware otherwise."""
    if isinstance(p, ScalarProfile1D):
        return antiderivative(p, start_value, origin)
    return Primitive(p, start_value, origin)


def profile_integral(p, lo: float = 0.0, hi: float = 1.0) -> float:
    return float(p.integral(lo, hi))


def random_profile(rng: np.random.Generator, degree: int = 3, harmonics: int = 4,
                   scale: float = 1.0) -> ScalarProfile1D:
    return ScalarProfile1D(
        rng.normal() * scale,
        tuple(rng.normal(size=degree) * scale / np.arange(1, degree + 1)),
        tuple(rng.normal(size=harmonics) * scale / np.arange(1, harmonics + 1) ** 2),
        tuple(rng.normal(size=harmonics) * scale / np.arange(1, harmonics + 1) ** 2),
    )


def random_positive_profile(rng: np.random.Generator, degree: int = 2, harmonics: int = 4,
                            scale: float = 0.3) -> ScalarProfile1D:
    """Random profile shifted so that its minimum exceeds 0.5 by the certificate."""
    p = random_profile(rng, degree, harmonics, scale)
    lo = float(np.min(p(np.linspace(0.0, 1.0, POSITIVITY_GRID)))) - p.derivative_bound() / POSITIVITY_GRID
    return ScalarProfile1D(p.const + (0.5 - lo) + abs(rng.normal()) * 0.2, p.poly, p.cos, p.sin)
