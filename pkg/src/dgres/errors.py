"""Exception types shared across the package."""


class DGError(Exception):
    """Base class for all package errors."""


class DomainMismatch(DGError):
    """Operands live in different generator universes."""


class InvalidSubstitution(DGError):
    pass


class ValidationError(DGError):
    pass


class PreconditionError(DGError):
    pass


class UnsupportedMode(DGError):
    pass


class ResourceError(DGError):
    """A search cap or Groebner budget was exhausted."""


class DSLError(DGError):
    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        where = "" if line is None else f"line {line}, col {col}: "
        super().__init__(where + message)
