"""Exception hierarchy shared by all modules."""


class DeloneError(Exception):
    """Base class for all library errors."""


class PreconditionError(DeloneError):
    """An operation was called with inputs violating its contract."""


class NotPositiveDefinite(PreconditionError):
    """A Gram matrix that must be positive definite is not."""


class FileFormatError(DeloneError):
    """A lattice or polytope file does not follow the text format."""
