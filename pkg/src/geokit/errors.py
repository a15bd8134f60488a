"""Exception hierarchy shared by all geokit modules."""


class GeokitError(Exception):
    """Base class for every error raised by geokit."""


class OutlineError(GeokitError, ValueError):
    """Malformed input geometry (closure gaps, non-finite coordinates, bad syntax)."""

    def __init__(self, message, curve_index=None):
        super().__init__(message)
        self.curve_index = curve_index


class OnBoundary(GeokitError):
    """The query point lies on the curve, so no winding number exists."""


class IntersectionOverlap(GeokitError):
    """A query segment overlaps a curve along a stretch of positive length."""


class RefinementLimitExceeded(GeokitError):
    pass


class CrossingCurves(GeokitError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class MergeFailure(GeokitError):
    pass


class BisectorMiss(GeokitError):
    pass


class SplitDepthExceeded(GeokitError):
    pass


class NonPositiveDepth(GeokitError):
    """A control point sits at or behind the eye plane (z <= 0)."""


class PipelineError(GeokitError):
    """Wraps a stage failure with the stage name and the offending curve."""

    def __init__(self, stage, cause, curve=None):
        super().__init__(f"{stage}: {cause}")
        self.stage = stage
        self.cause = cause
        self.curve = curve
