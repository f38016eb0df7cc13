"""Exception types shared across the package."""


class ChebError(Exception):
    """Base class for all package errors."""


class PreconditionError(ChebError, ValueError):
    """An operation was called outside its documented domain."""


class HypothesisError(PreconditionError):
    """A theorem hypothesis (primitivity, size bound) does not hold."""


class ContextMismatch(ChebError, ValueError):
    """Operands live in different rings or index contexts."""


class CampaignTooLarge(ChebError):
    """Exhaustive enumeration exceeds the configured class-size ceiling."""

    def __init__(self, count: int, ceiling: int):
        self.count = count
        self.ceiling = ceiling
        super().__init__(
            f"exhaustive class has {count} pairs, above the ceiling {ceiling}; "
            "use --samples for random sampling or raise --max-class-size"
        )
