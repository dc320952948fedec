"""Exception hierarchy shared by all modules."""


class LieConfError(Exception):
    """Base class for library errors."""


class ParseError(LieConfError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}" if line else message)


class DefinitionError(LieConfError):
    """Semantically invalid algebra definition (unknown generator, bad torsion...)."""


class NeedsFieldExtension(LieConfError):
    """A computation needs eigenvalues outside Q."""


class CapExhausted(LieConfError):
    """A degree cap or iteration cap was reached without stabilizing.

    ``partial`` holds whatever was computed so far (a lower bound).
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class BudgetExhausted(LieConfError):
    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class NotSolvable(LieConfError):
    pass


class NotApplicable(LieConfError):
    """Precondition of a construction step does not hold (e.g. equal weights)."""


class Degenerate(LieConfError):
    pass


class WindowError(LieConfError):
    """Requested vertex product lies outside the declared product window."""


class NotSquareZero(LieConfError):
    pass


class PostconditionError(LieConfError):
    """An asserted mathematical postcondition failed; indicates a bug or bad input."""
