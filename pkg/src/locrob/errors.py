"""Exception types shared across the package."""


class LocRobError(Exception):
    """Base class for all locrob errors."""


class InvalidPoint(LocRobError):
    """A point id is outside the metric space's universe."""


class DisconnectedMetric(LocRobError):
    """Shortest-path closure requested on a disconnected graph."""


class Infeasible(LocRobError):
    """The requested feasible family is empty."""


class CapExceeded(LocRobError):
    """An enumeration or brute-force size cap was exceeded."""


class NotATree(LocRobError):
    """An edge set expected to be a forest contains a cycle."""


class InvalidDecomposition(LocRobError):
    """A tree decomposition violates one of its validity conditions."""


class UnsupportedMetric(LocRobError):
    """Operation requires a metric variant the space does not provide."""


class InvalidSize(LocRobError):
    """A generator size parameter is below its documented minimum."""


class InvalidScale(LocRobError):
    """A reduction scale constant is below the threshold that makes it sound."""


class ParseError(LocRobError):
    """Malformed instance file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
