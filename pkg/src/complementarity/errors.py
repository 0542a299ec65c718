"""Exception hierarchy shared by all modules."""


class ComplementarityError(Exception):
    """Base class for errors raised by this package."""


class InputDomainError(ComplementarityError, ValueError):
    """An argument is outside the domain of the operation (negative size, NaN, ...)."""


class ContractError(ComplementarityError, ValueError):
    """Arguments are individually valid but inconsistent (grid mismatch, repeated index)."""


class ResourceError(ComplementarityError):
    """The requested problem exceeds a configured size cap."""


class NumericError(ComplementarityError, ArithmeticError):
    """A numerical routine failed or produced a result that violates its checks."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})


class ConfigError(ComplementarityError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message, line=None, key=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(f"key '{key}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.key = key
