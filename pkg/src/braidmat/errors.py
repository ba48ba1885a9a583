"""Exception hierarchy shared by all braidmat modules."""

from __future__ import annotations


class BraidMatError(Exception):
    """Base class for domain errors.  ``code`` is used in CLI error JSON."""

    code = "BraidMatError"

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class InvalidWord(BraidMatError, ValueError):
    code = "InvalidWord"


class MismatchedStrandCount(BraidMatError, ValueError):
    code = "MismatchedStrandCount"


class OffsetOutOfRange(BraidMatError, ValueError):
    code = "OffsetOutOfRange"


class InvalidMatrix(BraidMatError, ValueError):
    code = "InvalidMatrix"


class NonZeroDiagonal(InvalidMatrix):
    code = "NonZeroDiagonal"


class StrandCountTooLarge(BraidMatError, ValueError):
    code = "StrandCountTooLarge"


class NotT0(BraidMatError, ValueError):
    """Raised when a target matrix violates the T0 condition.

    ``triple`` is a violating ``(i, j, k)`` with ``i < j < k`` (1-based):
    ``M(i,j) = M(j,k) = 0`` but ``M(i,k) != 0``.
    """

    code = "NotT0"

    def __init__(self, triple: tuple[int, int, int], message: str | None = None):
        self.triple = triple
        i, j, k = triple
        super().__init__(message or f"M({i},{j})=M({j},{k})=0 but M({i},{k})!=0")

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["triple"] = list(self.triple)
        return d


class SumNotT0(NotT0):
    code = "SumNotT0"


class IllegalMove(BraidMatError, ValueError):
    code = "IllegalMove"


class BlackEdgePresent(BraidMatError, ValueError):
    code = "BlackEdgePresent"


class IndexOutOfRange(BraidMatError, ValueError):
    code = "IndexOutOfRange"


class BudgetExhausted(BraidMatError, RuntimeError):
    code = "BudgetExhausted"

    def __init__(self, nodes: int):
        self.nodes = nodes
        super().__init__(f"search budget exhausted after {nodes} nodes")


class InvalidParameters(BraidMatError, ValueError):
    code = "InvalidParameters"


class DecompositionFailed(BraidMatError, RuntimeError):
    code = "DecompositionFailed"


class RealizationFailed(BraidMatError, RuntimeError):
    code = "RealizationFailed"


class VertexNotFound(BraidMatError, KeyError):
    code = "VertexNotFound"

    def __str__(self) -> str:
        return Exception.__str__(self)
