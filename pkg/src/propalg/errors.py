"""Exception hierarchy shared by every module."""


class PropAlgError(Exception):
    """Base class for all errors raised by propalg."""


class SignatureError(PropAlgError):
    """Unknown operation name, arity mismatch, or incompatible signatures."""


class BackingError(PropAlgError):
    """The requested operation is not supported for this algebra backing."""


class CarrierError(PropAlgError):
    """Element, carrier, or domain mismatch."""


class PreconditionError(PropAlgError):
    """A precondition of a theorem-shaped check (or of a construction) is unmet.

    ``failed`` names the failing precondition and ``verdict`` carries the
    verdict that refuted it, when there is one.
    """

    def __init__(self, message, failed=None, verdict=None):
        super().__init__(message)
        self.failed = failed
        self.verdict = verdict


class InconsistencyError(PropAlgError):
    """A theorem-shaped check failed although its preconditions hold."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class SpecSyntaxError(PropAlgError):
    def __init__(self, message, line=None, col=None):
        where = f"line {line}" if line is not None else "input"
        if col is not None:
            where += f", col {col}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.col = col
