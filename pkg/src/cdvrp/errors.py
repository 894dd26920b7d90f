"""Exception types shared across the package."""


class CdvrpError(Exception):
    """Base class for all package errors."""


class InvalidInstanceError(CdvrpError):
    """An instance failed validation and a solver refused to run on it.

    Carries the offending validation report in ``report``.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class InfeasibleError(CdvrpError):
    """No feasible solution can exist for the given inputs."""


class InfeasibleItemError(InfeasibleError):
    """A demand item does not fit into any bin class."""

    def __init__(self, vertex, size, max_capacity):
        super().__init__(
            f"item at vertex {vertex} with size {size} exceeds every bin "
            f"capacity (largest is {max_capacity})"
        )
        self.vertex = vertex
        self.size = size
        self.max_capacity = max_capacity


class GenerationError(CdvrpError):
    """Random instance generation exhausted its retry budget."""


class ResourceLimitError(CdvrpError):
    """An exhaustive oracle exceeded its configured search limits.

    Distinct from :class:`InfeasibleError`: the search was cut short, so
    nothing is known about feasibility.
    """


class InstanceFormatError(CdvrpError):
    """An instance or solution file could not be parsed.

    ``line`` is the 1-based line number of the offending input when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
