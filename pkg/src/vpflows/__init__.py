"""Invariants and explicit perturbations of volume-preserving flows on model geometries."""

__version__ = "0.1.0"

from . import entropy, invariants, local_functionals, model, numerics, perturbations  # noqa: E402

__all__ = ["__version__", "entropy", "invariants", "local_functionals", "model", "numerics", "perturbations"]
