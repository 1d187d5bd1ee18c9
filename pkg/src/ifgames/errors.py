"""Exception types shared across the package."""


class IfGamesError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(IfGamesError):
    """Raised on malformed sentence text; carries the offset of the bad token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class StructureFormatError(IfGamesError):
    """Raised when a structure file is malformed or violates structure invariants."""


class EvaluationError(IfGamesError):
    """Raised when a term or formula cannot be evaluated (missing variable or symbol)."""


class GameBuildError(IfGamesError):
    """Raised when a semantic game cannot be turned into a strategic game."""


class BudgetExceededError(GameBuildError):
    """Raised when a player's pure-strategy count exceeds the configured budget."""

    def __init__(self, player: str, count: int, budget: int):
        super().__init__(
            f"{player} would have {count} pure strategies, over the budget of {budget}"
        )
        self.player = player
        self.count = count
        self.budget = budget


class SizeLimitError(IfGamesError):
    """Raised when an exhaustive method is asked to run beyond its size cutoff."""
