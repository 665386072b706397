"""Exception types shared across the library."""


class RcrlError(Exception):
    """Base class for library errors."""


class ConfigError(RcrlError):
    """Invalid configuration, shapes, or arguments."""


class NumericsError(RcrlError):
    """Non-finite values where finite math was required."""


class ResetError(RcrlError):
    """Environment reset could not produce a valid episode start."""


class TrainingDiverged(RcrlError):
    """A loss or parameter became non-finite during training."""
