"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the range where an operation is defined."""


class IdentityMismatch(AssertionError):
    """Two independent derivations of the same exact quantity disagree."""


class TerminationGuardExceeded(RuntimeError):
    """The straightening loop pushed a head index below its a-priori bound."""


class ParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position
