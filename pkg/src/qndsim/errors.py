"""Exception hierarchy for the QND simulation package."""


class QNDError(Exception):
    """Base class for numeric failures raised by this package."""


class GridError(QNDError, ValueError):
    """Unusable discretization or mismatched grids."""


class SupportError(QNDError):
    """A state would leave (or touch) the edge of its quadrature grid."""


class NormalizationError(QNDError):
    """Zero-norm state, vanishing outcome probability or bad trace."""


class UnderResolvedKernelError(QNDError):
    """Measurement kernel narrower than the grid spacing.

    Take the projective limit analytically instead
    (see :func:`qndsim.measurement.projective_distribution`).
    """


class OptimizationError(QNDError):
    """Bracket without sign change or objective that is not unimodal."""
