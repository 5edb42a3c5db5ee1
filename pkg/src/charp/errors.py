"""Exception hierarchy shared by every module of the package."""


class CharpError(Exception):
    """Base class for all package errors."""


class ConfigError(CharpError):
    """Unknown variable, mismatched field configurations, bad field parameters."""


class MathError(CharpError):
    """A mathematical precondition failed (CLI exit code 3)."""


class DomainError(MathError):
    """Argument outside the domain of an operation (zero dlog, non p-th power root)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MembershipError(MathError):
    """Element does not lie in the subfield generated by a p-basis subset."""

    def __init__(self, message, residue_class=None):
        super().__init__(message)
        self.residue_class = residue_class


class PreconditionError(MathError):
    """Generic precondition failure, optionally carrying a witness object."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class FiltrationError(MathError):
    """Class lies too deep in the filtration for the requested operation."""

    def __init__(self, message, level):
        super().__init__(message)
        self.level = level


class UnsupportedPresentationError(MathError):
    """Input cannot be represented by the finite presentations used here."""


class ParseError(CharpError):
    def __init__(self, message, line=1, column=1, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        detail = f"{message} at line {line}, column {column}"
        if self.expected:
            detail += f" (expected one of: {', '.join(self.expected)})"
        super().__init__(detail)
