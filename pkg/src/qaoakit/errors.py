"""Exception hierarchy.

The command-line front end maps each family to its own exit code, so every
error raised by the library derives from exactly one of the four bases below.
"""


class QaoaError(Exception):
    """Base class for all library errors."""


class GraphParseError(QaoaError, ValueError):
    """Edge-list text could not be turned into a graph."""


class MalformedLineError(GraphParseError):
    pass


class VertexOutOfRangeError(GraphParseError):
    pass


class DuplicateEdgeError(GraphParseError):
    pass


class SelfLoopError(GraphParseError):
    pass


class ResourceLimitError(QaoaError):
    """A state vector or basis would exceed the configured size cap."""


class BudgetExceededError(QaoaError):
    """An iterative routine ran past its evaluation or iteration budget."""


class InfeasibleError(QaoaError, ValueError):
    """Inputs lie outside the domain where an operation is defined."""


class GenerationError(InfeasibleError):
    """Random graph generation gave up after its retry budget."""


class SpecialCaseError(InfeasibleError):
    """The input is the disconnected-K4 case excluded from the 3-regular analysis."""
