"""Security analysis of continuous-variable QKD with thermal source states."""

from .channel import ChannelParams, SourceParams
from .errors import CVQKDError, InvalidArgument, InvalidState, NumericFailure
from .rates import KeyRateResult, Protocol, key_rate

__all__ = [
    "ChannelParams",
    "SourceParams",
    "CVQKDError",
    "InvalidArgument",
    "InvalidState",
    "NumericFailure",
    "KeyRateResult",
    "Protocol",
    "key_rate",
]
__version__ = "0.1.0"
