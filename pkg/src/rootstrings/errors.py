"""Exception types shared across the package."""


class RootStringError(Exception):
    """Base class for all errors raised by rootstrings."""


class ConstructionError(RootStringError, ValueError):
    """A root-system type was requested with an invalid family or rank."""


class DomainError(RootStringError, ValueError):
    """An operation was called outside its precondition."""


class ConsistencyError(RootStringError, RuntimeError):
    """An internal invariant failed; indicates a bug or corrupted data."""
