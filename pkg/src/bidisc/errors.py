"""Exception and warning types shared across the package."""


class BidiscError(Exception):
    """Base class for all package errors."""


class WindowOverflow(BidiscError, ValueError):
    """A nonzero coefficient would leave the degree window."""


class PointOutsideDisc(BidiscError, ValueError):
    pass


class IndexOutsideWindow(BidiscError, IndexError):
    pass


class MalformedInput(BidiscError, ValueError):
    """Serialized input failed validation; the message names the offending entry."""


class EmptySpan(BidiscError):
    pass


class NotContained(BidiscError):
    """The inner subspace is not contained in the ambient one."""


class EmptyInterior(BidiscError):
    """The margin leaves no basis vectors inside the interior window."""


class NotNormalized(BidiscError, ValueError):
    pass


class WanderingNotOneDim(BidiscError):
    def __init__(self, dimension: int):
        super().__init__(f"wandering subspace O1 & O2 has dimension {dimension}, expected 1")
        self.dimension = dimension


class EmptyWandering(WanderingNotOneDim):
    """Zero-dimensional wandering intersection: the model is numerically trivial."""

    def __init__(self):
        super().__init__(0)


class TruncationWarning(UserWarning):
    """Coefficient mass was discarded by truncation to a window."""


class UnjustifiedRouteWarning(UserWarning):
    """An extraction route ran without its doubly-commuting precondition."""
