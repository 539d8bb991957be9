class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class CapacityError(ValueError):
    """Request exceeds the prime table or the configured memory budget."""


class ShapeError(ValueError):
    """Integer does not have the factorization shape a relation applies to."""


class RangeError(ValueError):
    """Query point lies beyond the range a prime table covers."""
