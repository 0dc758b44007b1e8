"""Exception hierarchy shared by every module.

User-facing problems (malformed input, diagrams that violate a hypothesis)
derive from :class:`InvalidInput`; broken internal invariants raise
:class:`InternalError`, which subclasses ``AssertionError`` on purpose.
"""


class InvalidInput(ValueError):
    """Base class for errors caused by the caller's data."""


class ContractError(InvalidInput):
    """Shape or ambient mismatch between arguments."""


class IllDefined(InvalidInput):
    """A matrix does not send relations of the source into the target relations."""


class NotInduced(InvalidInput):
    """A homomorphism does not respect the requested sub/quotient structure."""


class NotCommutative(InvalidInput):
    def __init__(self, square, detail=""):
        self.square = square
        super().__init__(f"square {square} does not commute" + (f": {detail}" if detail else ""))


class RowNotExact(InvalidInput):
    def __init__(self, row, position, detail=""):
        self.row = row
        self.position = position
        msg = f"{row} row is not exact at {position}"
        super().__init__(msg + (f": {detail}" if detail else ""))


class HypothesisFailed(InvalidInput):
    def __init__(self, which):
        self.which = which
        super().__init__(f"hypothesis failed: {which}")


class ParseError(InvalidInput):
    def __init__(self, message, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class CapExceeded(InvalidInput):
    """A group is infinite or larger than the enumeration cap."""


class GenerationExhausted(RuntimeError):
    """The random generator hit its resample limit."""


class InternalError(AssertionError):
    """A step the theory guarantees has failed; this is a bug."""
