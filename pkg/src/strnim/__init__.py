"""StrNim: engine and analysis toolkit for the string-shrinking Nim variant."""

from .position import (
    CodingMap,
    EMPTY,
    Move,
    ParseError,
    Position,
    Run,
    apply_move,
    canonical_key,
    legal_moves,
    parse,
    recode,
    render,
    reverse,
    successors,
)
from .solver import (
    BudgetExhaustedError,
    ConsistencyError,
    TranspositionTable,
    Verdict,
    classify,
    grundy,
    mex,
    winning_moves,
)

__all__ = [
    "CodingMap",
    "EMPTY",
    "Move",
    "ParseError",
    "Position",
    "Run",
    "apply_move",
    "canonical_key",
    "legal_moves",
    "parse",
    "recode",
    "render",
    "reverse",
    "successors",
    "BudgetExhaustedError",
    "ConsistencyError",
    "TranspositionTable",
    "Verdict",
    "classify",
    "grundy",
    "mex",
    "winning_moves",
]
