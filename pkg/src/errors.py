"""Exception types raised by the library."""

from typing import Any, Optional


class GreedyLabError(Exception):
    """Base class for every error raised by this package."""


class ZeroVector(GreedyLabError):
    """A norming functional was requested at the zero vector."""


class ParamMismatch(GreedyLabError):
    """Two vectors from differently parametrised spaces were combined."""


class ParamError(GreedyLabError, ValueError):
    """Exponents, dimensions or sizes outside their admissible range."""


class VectorFormatError(GreedyLabError, ValueError):
    """Malformed vector input (duplicate index, bad JSON schema, wrong arity)."""


class GridBudgetExceeded(GreedyLabError):
    """The refinement grid needed for exact integration is too large."""

    def __init__(self, cells: int, limit: int):
        super().__init__(f"refinement grid needs {cells} cells, limit is {limit}")
        self.cells = cells
        self.limit = limit


class SupportTooLarge(GreedyLabError):
    """Brute-force best N-term approximation was asked for a support above the guard."""

    def __init__(self, size: int, limit: int):
        super().__init__(f"support of size {size} exceeds the brute-force limit {limit}")
        self.size = size
        self.limit = limit


class MaxIterExceeded(GreedyLabError):
    """The iterative solver stopped at max_iter; ``result`` holds the best iterate."""

    def __init__(self, message: str, result: Optional[Any] = None):
        super().__init__(message)
        self.result = result
