"""Quantum teleportation over a two-mode squeezed vacuum resource.

Two protocols share the resource ``sqrt(1-lam^2) sum_n lam^n |n>|n>``:

* :mod:`svteleport.quadrature` -- joint quadrature measurement, finite squeezing;
* :mod:`svteleport.numphase` -- photon-number difference and phase-sum measurement.

:mod:`svteleport.analytics` holds the closed forms both are checked against.
"""

from . import analytics, fock, numphase, quadrature, resource
from .errors import (
    GridCoverageError,
    InvalidDimensionError,
    InvalidOutcomeError,
    InvalidParameterError,
    LossyDownshiftError,
    TruncationError,
)

__version__ = "0.1.0"

__all__ = [
    "analytics",
    "fock",
    "numphase",
    "quadrature",
    "resource",
    "GridCoverageError",
    "InvalidDimensionError",
    "InvalidOutcomeError",
    "InvalidParameterError",
    "LossyDownshiftError",
    "TruncationError",
]
