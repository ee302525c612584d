"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the admissible range of an operation."""


class PreconditionError(ValueError):
    """A theorem check was asked to run on an input its hypothesis excludes."""


class ParseError(ValueError):
    """An input file could not be decoded into a function."""
