"""Exception types raised by the engine."""


class FlowError(Exception):
    """Base class for every error this package raises on purpose."""


class DuplicateName(FlowError):
    pass


class UnknownDataReference(FlowError):
    pass


class ArityMismatch(FlowError):
    pass


class InputOutputOverlap(FlowError):
    pass


class ValidationError(FlowError):
    """Structural problem not covered by a more specific class."""


class ValueMissingForToken(FlowError):
    pass


class TypeMismatch(FlowError):
    pass


class NoNewToken(FlowError):
    pass


class UnknownProcess(FlowError):
    pass


class OutputArityMismatch(FlowError):
    pass


class NotEnabled(FlowError):
    pass


class UnknownKind(FlowError):
    pass


class ParseError(FlowError):
    """Malformed document line. Carries a 1-based line number."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
