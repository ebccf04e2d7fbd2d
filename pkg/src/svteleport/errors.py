"""Exception types raised across the package."""


class InvalidDimensionError(ValueError):
    """Cutoff or operator/state dimensions are unusable or mismatched."""


class InvalidParameterError(ValueError):
    """A physical parameter is outside its domain (e.g. lambda >= 1)."""


class TruncationError(RuntimeError):
    """Probability mass reached the Fock-space boundary; raise the cutoff."""


class GridCoverageError(RuntimeError):
    """A wavefunction has non-negligible weight at the edge of its grid."""


class InvalidOutcomeError(ValueError):
    """A measurement outcome with zero probability was requested."""


class LossyDownshiftError(ValueError):
    """A number downshift would discard amplitude below the shift."""

    def __init__(self, message, lost_mass):
        super().__init__(message)
        self.lost_mass = lost_mass
