"""Exception hierarchy shared by all epdyn modules."""


class EPDynError(Exception):
    """Base class for computation errors raised by epdyn."""


class InvalidArgumentError(EPDynError, ValueError):
    """Non-finite or otherwise malformed input at a public boundary."""


class DegenerateParametersError(EPDynError):
    """CC = 4 delta**2 + (eps1 - eps2)**2 vanishes; the EP formulas break down."""


class DefectiveSpectrumError(EPDynError):
    """The operator is (numerically) non-diagonalisable; use :mod:`epdyn.jordan`."""


class NotDefectiveError(EPDynError):
    """A Jordan decomposition was requested for a diagonalisable matrix."""


class DiagonalDegenerateError(EPDynError):
    """The matrix is a multiple of the identity: a true degeneracy, not an EP."""


class RankError(EPDynError):
    """The associate-vector system is inconsistent or has the wrong rank."""


class SingularTransformError(EPDynError):
    """The Jordan basis change is singular."""


class StepTooCoarseError(EPDynError):
    """Branch tracking cannot decide the square-root sign between two samples."""

    def __init__(self, index, message=None):
        self.index = index
        super().__init__(
            message
            or f"square-root continuation ambiguous at sample {index}; refine the grid"
        )
