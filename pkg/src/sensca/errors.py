"""Exception types shared across the toolkit."""


class SenscaError(Exception):
    """Base class for toolkit errors."""


class DimensionMismatch(SenscaError):
    pass


class NonQuiescentBackground(SenscaError):
    """Background state is not a fixpoint of the rule; sparse simulation would be wrong."""


class BadRuleTable(SenscaError):
    pass


class BadConfiguration(SenscaError):
    pass


class HeadUnderflow(SenscaError):
    """A semi-infinite machine tried to move its head below cell 0."""


class UnwiredExit(SenscaError):
    pass


class AlphabetCollision(SenscaError):
    pass


class BlockTooSmall(SenscaError):
    pass


class PerimeterTooSmall(SenscaError):
    pass


class TargetInsideRedZone(SenscaError):
    pass


class TargetUnreachable(SenscaError):
    pass


class WindowOutsideWord(SenscaError):
    pass
