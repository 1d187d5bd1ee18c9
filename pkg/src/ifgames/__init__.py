"""Exact equilibrium values of independence-friendly sentences on finite structures.

The pipeline: parse a sentence, pair it with a structure, enumerate each
player's uniform pure strategies into a win-loss matrix game, and solve that
game exactly with rational linear programming, bounds, and equilibrium
certificates.
"""

from .errors import (
    BudgetExceededError,
    EvaluationError,
    GameBuildError,
    IfGamesError,
    ParseError,
    SizeLimitError,
    StructureFormatError,
)
from .formula import (
    App,
    Atom,
    Connective,
    Equals,
    Formula,
    Quant,
    Term,
    Var,
    Violation,
    Vocabulary,
    format_formula,
    parse,
    validate,
)
from .matrix_game import (
    Bounds,
    GameMatrix,
    MixedStrategy,
    best_pure_response_value,
    expected_utility,
    format_matrix,
    is_balanced,
    is_col_balanced,
    is_row_balanced,
    parse_matrix,
    reduce,
    row_submatrix,
    tallies,
)
from .semantic_game import (
    ABELARD,
    DEFAULT_STRATEGY_BUDGET,
    ELOISE,
    DecisionPoint,
    GameBuildReport,
    PureStrategy,
    build_matrix,
    decision_points,
    enumerate_strategies,
    play,
)
from .structure import (
    Assignment,
    Structure,
    eval_term,
    holds_qf,
    load_structure,
    save_structure,
)
from .value_engine import (
    ValueReport,
    balanced_submatrix_certificate,
    balanced_value,
    detect_trivial,
    solve_by_support_enumeration,
    solve_value,
    submatrix_lower_bound,
    uniform_bounds,
    verify_equilibrium,
)

__all__ = [name for name in dir() if not name.startswith("_")]
