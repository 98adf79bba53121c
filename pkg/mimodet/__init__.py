"""Massive MIMO uplink detection with operation counting.

    >>> from mimodet import DetectorSpec, phy, runDetector
    >>> spec = DetectorSpec.fromToken("mmse:ldl")
    >>> result = runDetector(spec, H, y, sigma2)
    >>> bits, symbols = phy.slice(result.xSoft, phy.Constellation(16))
"""
from . import phy
from .core import CountingConvention, OpCount
from .config import settings
from .detect import Backend, DetectorKind, DetectorSpec, DetectResult, runDetector
from .exceptions import DetectionError

__version__ = "1.0.0"

__all__ = [
    "Backend",
    "CountingConvention",
    "DetectionError",
    "DetectorKind",
    "DetectorSpec",
    "DetectResult",
    "OpCount",
    "phy",
    "runDetector",
    "settings",
]
