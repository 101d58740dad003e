"""Exception hierarchy shared by all sendovlab modules."""


class SendovLabError(Exception):
    """Base class for every error raised by sendovlab."""


class DegreeTooLow(SendovLabError, ValueError):
    pass


class NonConvergence(SendovLabError, ArithmeticError):
    pass


class NotAZero(SendovLabError, ValueError):
    pass


class RootOutsideDisk(SendovLabError, ValueError):
    pass


class DegenerateConfiguration(SendovLabError, ValueError):
    """Input polynomial has (numerically) multiple zeros or critical points."""


class BranchPointSingularity(SendovLabError, ArithmeticError):
    """Q''(zeta, u) vanishes: the implicit function zeta(u) is not defined."""


class PathNearBranchPoint(SendovLabError, ArithmeticError):
    """Continuation step size fell below the floor.

    ``trajectory`` holds the partial record up to the failure, when known.
    """

    def __init__(self, msg, trajectory=None):
        super().__init__(msg)
        self.trajectory = trajectory


class StartNotCritical(SendovLabError, ValueError):
    pass


class SheetCollision(SendovLabError, ArithmeticError):
    pass


class ProjectionSingular(SendovLabError, ArithmeticError):
    pass


class LoopNotClosed(SendovLabError, ValueError):
    pass


class SingularEvaluation(SendovLabError, ArithmeticError):
    pass


class QuadratureNotConverged(SendovLabError, ArithmeticError):
    pass


class PreconditionError(SendovLabError, ValueError):
    """An operation was called outside its documented domain."""


class UsageError(SendovLabError):
    """Bad command line or unreadable input file."""
