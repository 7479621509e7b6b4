"""Exception types shared across the package."""


class FunnelError(Exception):
    """Base class for all package-specific errors."""


class MergeTooSmall(FunnelError):
    """A merge was requested for fewer than two symbols."""


class InvalidPartition(FunnelError):
    """Blocks do not form a partition of the released alphabet."""


class GroundSetTooLarge(FunnelError):
    """Exhaustive enumeration was requested beyond its size cap."""


class InvalidPermutation(FunnelError):
    """A permutation does not satisfy a required prefix constraint."""


class NotConverged(FunnelError):
    """Min-norm-point tolerance not reached within the iteration cap.

    Carries the best iterate found so far, so callers that can tolerate a
    degraded answer (the local MDSF solvers) may continue with it.
    """

    def __init__(self, message, minimizer=frozenset(), value=0.0, iterations=0):
        super().__init__(message)
        self.minimizer = minimizer
        self.value = value
        self.iterations = iterations


class NonSubmodularDetected(FunnelError):
    """The min-norm solver certified that its oracle is not submodular."""


class FileError(FunnelError):
    """A dataset file could not be read."""


class ColumnNotFound(FunnelError):
    """A requested column is missing from the dataset."""


class EmptyAfterFiltering(FunnelError):
    """Every data row was dropped by missing-value filtering."""
