"""Exception types shared across the package."""


class SupertwError(Exception):
    """Base class for all package errors."""


class InvalidGraphError(SupertwError):
    pass


class NotConnectedError(SupertwError):
    pass


class InvalidPositionError(SupertwError):
    pass


class InvalidBagError(SupertwError):
    pass


class InvalidDecompositionError(SupertwError):
    pass


class UnknownSymbolError(SupertwError):
    pass


class AlphabetMismatchError(SupertwError):
    pass


class ResourceExceededError(SupertwError):
    """A construction outgrew its transition budget or deadline."""

    def __init__(self, message, stage=None, count=None, limit=None):
        super().__init__(message)
        self.stage = stage
        self.count = count
        self.limit = limit


class SizeLimitError(SupertwError):
    """Input too large for an exhaustive (oracle-grade) computation."""


class CmsoSyntaxError(SupertwError):
    """Formula text could not be parsed; carries a 1-based line/column."""

    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class CmsoKindError(SupertwError):
    """A variable is used at the wrong kind, unbound, or rebound in scope."""
