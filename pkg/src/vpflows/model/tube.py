"""Toric flow tubes ``X = F(t) d/dx + G(t) d/dy`` on ``I x T^2`` with volume ``dt^dx^dy``."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .profiles import POSITIVITY_GRID, PerturbedProfile, ScalarProfile1D, primitive


class TubeError(ValueError):
    pass


def _min_on(p, lo: float, hi: float, grid: int = POSITIVITY_GRID) -> float:
    return float(np.min(p(np.linspace(lo, hi, grid))))


@dataclass(frozen=True)
class TubeProfile:
    """Profile pair (F, G) plus class start (a0, b0) and frame offset (m, n).

    ``interval`` is the parameter range occupied by the tube; sub-tubes
    produced by :meth:`restrict` keep the original profile functions.
    """

    F: ScalarProfile1D | PerturbedProfile
    G: ScalarProfile1D
    class_start: tuple[float, float] = (0.0, 0.0)
    frame_offset: tuple[int, int] = (1, 0)
    interval: tuple[float, float] = (0.0, 1.0)

    def __post_init__(self):
        object.__setattr__(self, "class_start", tuple(float(v) for v in self.class_start))
        m, n = self.frame_offset
        if int(m) != m or int(n) != n:
            raise TubeError(f"frame offset must be integral, got {self.frame_offset}")
        object.__setattr__(self, "frame_offset", (int(m), int(n)))
        t0, t1 = self.interval
        if not t0 < t1:
            raise TubeError("tube interval must be non-degenerate")
        object.__setattr__(self, "interval", (float(t0), float(t1)))
        if isinstance(self.G, ScalarProfile1D) and self.interval == (0.0, 1.0):
            ok = self.G.is_positive()
        else:
            ok = _min_on(self.G, t0, t1) > 0
        if not ok:
            raise TubeError("G must be positive on the tube (grid + derivative-bound check failed)")

    @property
    def length(self) -> float:
        return self.interval[1] - self.interval[0]

    @property
    def A(self):
        """Primitive with ``dA = G dt`` and ``A(t0) = a0``."""
        return primitive(self.G, self.class_start[0], self.interval[0])

    @property
    def B(self):
        """Primitive with ``dB = -F dt`` and ``B(t0) = b0``."""
        return _NegPrimitive(primitive(self.F, -self.class_start[1], self.interval[0]))

    def integral_F(self) -> float:
        return float(self.F.integral(*self.interval))

    def integral_G(self) -> float:
        return float(self.G.integral(*self.interval))

    def class_end(self) -> tuple[float, float]:
        """(c, d) = (a0 + int G, b0 - int F)."""
        a0, b0 = self.class_start
        return (a0 + self.integral_G(), b0 - self.integral_F())

    def field(self, t, x=None, y=None):
        """Vector field components (X^t, X^x, X^y) = (0, F(t), G(t))."""
        t = np.asarray(t, dtype=float)
        return np.zeros(t.shape), self.F(t), self.G(t)

    def flow(self, T: float, t, x, y):
        """Exact time-T flow (t, x + T F(t), y + T G(t))."""
        return t, x + T * self.F(t), y + T * self.G(t)

    def restrict(self, t0: float, t1: float) -> "TubeProfile":
        """Invariant sub-tube over [t0, t1] with the induced class start."""
        lo, hi = self.interval
        if not lo <= t0 < t1 <= hi:
            raise TubeError(f"sub-interval [{t0}, {t1}] not inside {self.interval}")
        start = (float(self.A(t0)), float(self.B(t0)))
        return replace(self, class_start=start, interval=(t0, t1))

    def with_start(self, a0: float, b0: float) -> "TubeProfile":
        return replace(self, class_start=(a0, b0))

    def with_offset(self, m: int, n: int) -> "TubeProfile":
        return replace(self, frame_offset=(m, n))

    def integer_shear(self, p: int) -> "TubeProfile":
        """Push forward by ``(t, x, y) -> (t, x + p y, y)``.

        The field becomes ``(F + p G, G)``, the primitive ``A dx + (B - p A) dy``
        and the frame offset ``(m, n - p m)``.
        """
        if int(p) != p:
            raise TubeError("shear must be integral to descend to the torus")
        p = int(p)
        if not isinstance(self.G, ScalarProfile1D):
            raise TubeError("integer shear needs a basis profile for G")
        if isinstance(self.F, PerturbedProfile):
            F = PerturbedProfile(self.F.base + self.G.scale(p), self.F.terms)
        else:
            F = self.F + self.G.scale(p)
        a0, b0 = self.class_start
        m, n = self.frame_offset
        return replace(self, F=F, class_start=(a0, b0 - p * a0), frame_offset=(m, n - p * m))


@dataclass(frozen=True)
class _NegPrimitive:
    inner: object

    def __call__(self, t):
        return -self.inner(t)
