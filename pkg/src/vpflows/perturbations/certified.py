"""Certificate records for constructed fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class Clause:
    """One certificate line: ``measured`` compared against ``bound`` (``measured <= bound``)."""

    name: str
    measured: float
    bound: float
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            object.__setattr__(self, "passed", bool(self.measured <= self.bound))
        if not (np.isfinite(self.measured) and np.isfinite(self.bound)):
            raise ValueError(f"clause {self.name!r} has non-finite entries")

    def to_dict(self) -> dict:
        return {"name": self.name, "measured": float(self.measured), "bound": float(self.bound),
                "pass": bool(self.passed)}


@dataclass(frozen=True)
class CertifiedField:
    """A constructed field with its diagnostics.

    ``clauses`` gate the construction; ``info`` holds informative numbers that
    carry no pass/fail meaning.
    """

    construction: str
    evaluator: Callable
    inputs: dict
    clauses: tuple[Clause, ...]
    info: dict = field(default_factory=dict)

    def __call__(self, *args):
        return self.evaluator(*args)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def clause(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    @property
    def failed(self) -> list[str]:
        return [c.name for c in self.clauses if not c.passed]

    def to_certificate(self) -> dict:
        return {"construction": self.construction, "inputs": self.inputs,
                "clauses": [c.to_dict() for c in self.clauses], "info": self.info}


class CertificateError(RuntimeError):
    """Raised when a construction's certificate has failing clauses; carries the field."""

    def __init__(self, cert: CertifiedField):
        super().__init__(f"{cert.construction}: failed clause(s) {', '.join(cert.failed)}")
        self.cert = cert
