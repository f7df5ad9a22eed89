"""Exception hierarchy shared by every module of the package."""


class PostSelError(Exception):
    """Base class for all computation errors raised by ``postsel``."""


class ZeroVector(PostSelError, ValueError):
    pass


class IndexOutOfRange(PostSelError, IndexError):
    pass


class DimensionMismatch(PostSelError, ValueError):
    pass


class NotUnitary(PostSelError, ValueError):
    pass


class NotHermitian(PostSelError, ValueError):
    pass


class TooLarge(PostSelError, ValueError):
    pass


class BadN(PostSelError, ValueError):
    pass


class OrthogonalSelection(PostSelError, ZeroDivisionError):
    """Pre- and post-selected states are (numerically) orthogonal."""


class IncompleteSet(PostSelError, ValueError):
    pass


class NotProjector(PostSelError, ValueError):
    pass


class ZeroDenominator(PostSelError, ZeroDivisionError):
    """Every outcome of the intermediate measurement forbids the post-selection."""


class PostSelectionImpossible(PostSelError, ZeroDivisionError):
    pass


class GridTooSmall(PostSelError, ValueError):
    pass


class BadTriplet(PostSelError, ValueError):
    pass


class UnknownScenario(PostSelError, KeyError):
    pass


class BadParams(PostSelError, ValueError):
    pass


class ObservableSyntaxError(PostSelError, ValueError):
    """Malformed observable expression; ``position`` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DuplicateSite(PostSelError, ValueError):
    pass


class SiteOutOfRange(PostSelError, IndexError):
    pass
