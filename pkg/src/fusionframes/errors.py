"""Exception hierarchy shared by every module of the package."""


class FusionFrameError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(FusionFrameError, ValueError):
    pass


class ZeroSpan(FusionFrameError, ValueError):
    pass


class SingularOperator(FusionFrameError, ValueError):
    pass


class NotSPD(FusionFrameError, ValueError):
    pass


class NotAFrame(FusionFrameError, ValueError):
    pass


class LocalSpanMismatch(FusionFrameError, ValueError):
    pass


class NotRieszBasis(FusionFrameError, ValueError):
    pass


class ScalingNotVerified(FusionFrameError, ValueError):
    pass


class ZeroCoefficient(FusionFrameError, ValueError):
    pass


class WrongExcess(FusionFrameError, ValueError):
    pass


class NoLineRemovable(FusionFrameError, ValueError):
    pass


class NotOneExcess(FusionFrameError, ValueError):
    pass


class NonLineInI1(FusionFrameError, ValueError):
    pass


class DegenerateAngles(FusionFrameError, ValueError):
    pass


class AngleOrder(FusionFrameError, ValueError):
    pass


class NotSpanning(FusionFrameError, ValueError):
    pass
