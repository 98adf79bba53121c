"""Everything needed to realize y = H x + n.

Square M-QAM constellations are Gray labelled per axis: the first half of a label selects
the in-phase level through a reflected Gray code, the second half the quadrature level.
Points are stored in label order, so `points[label]` is the symbol carrying `label`.
"""
import csv
import math
import typing

import numpy as np

from .types import Bits, CMatrix, CVector, ModulationName
from .exceptions import DimensionMismatch, InvalidParameter, NumericalOverflow

_ORDERS: dict[str, int] = {"qpsk": 4, "16qam": 16, "64qam": 64}


def _grayCode(n: np.ndarray) -> np.ndarray:
    return n ^ (n >> 1)


class Constellation:
    def __init__(self, order: int) -> None:
        """Gray-mapped square QAM alphabet with unit average energy.

        Args:
            order (int): number of points, one of 4, 16, 64.

        Raises:
            InvalidParameter: if the order is not a supported square QAM size.
        """
        if order not in _ORDERS.values():
            raise InvalidParameter(
                f"unsupported constellation order {order}",
                summary="use 4 (qpsk), 16 (16qam) or 64 (64qam)",
            )

        self.order = order
        self.bitsPerSymbol = int(math.log2(order))
        self.bitsPerAxis = self.bitsPerSymbol // 2
        self.levelsPerAxis = 1 << self.bitsPerAxis

        # axis level index -> gray label, and the inverse map
        levelIndex = np.arange(self.levelsPerAxis)
        self._axisLabel = _grayCode(levelIndex)
        self._axisLevelOfLabel = np.empty(self.levelsPerAxis, dtype=np.int64)
        self._axisLevelOfLabel[self._axisLabel] = levelIndex

        # mean energy of the unnormalized grid is 2(M - 1)/3
        self.scale = math.sqrt(2.0 * (order - 1) / 3.0)

        labels = np.arange(order)
        iLevel = self._axisLevelOfLabel[labels >> self.bitsPerAxis]
        qLevel = self._axisLevelOfLabel[labels & (self.levelsPerAxis - 1)]
        self.points: CVector = (
            self._levelValue(iLevel) + 1j * self._levelValue(qLevel)
        ) / self.scale
        self.labels: Bits = self._labelBits(labels)

    @staticmethod
    def fromName(name: ModulationName | str) -> "Constellation":
        try:
            return Constellation(_ORDERS[name.lower()])
        except KeyError:
            raise InvalidParameter(
                f"unknown modulation '{name}'",
                summary=f"known modulations: {', '.join(_ORDERS)}",
            )

    @property
    def name(self) -> str:
        return {v: k for k, v in _ORDERS.items()}[self.order]

    @property
    def box(self) -> float:
        """largest per-axis coordinate; the box bound of ADMIN's projection"""
        return (self.levelsPerAxis - 1) / self.scale

    def __repr__(self) -> str:
        return f"<Constellation {self.name} M={self.order}>"

    def _levelValue(self, level: np.ndarray) -> np.ndarray:
        return (2 * level - (self.levelsPerAxis - 1)).astype(np.float64)

    def _labelBits(self, labels: np.ndarray) -> Bits:
        shifts = np.arange(self.bitsPerSymbol - 1, -1, -1)
        return ((labels[:, None] >> shifts) & 1).astype(np.uint8)

    def toRows(self) -> list[tuple[str, float, float]]:
        return [
            ("".join(str(b) for b in self.labels[i]), p.real, p.imag)
            for i, p in enumerate(self.points)
        ]

    def toCsv(self, path: str) -> None:
        """Writes the label table as `label,re,im` with full double precision."""
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(["label", "re", "im"])
            for label, re, im in self.toRows():
                writer.writerow([label, repr(float(re)), repr(float(im))])


def modulate(bits: typing.Any, constellation: Constellation) -> CVector:
    """Maps each log2(M)-bit group (most significant bit first) to its Gray labelled point.

    Raises:
        DimensionMismatch: if the bit count is not a multiple of log2(M).
    """
    b = np.asarray(bits, dtype=np.uint8).ravel()
    k = constellation.bitsPerSymbol
    if b.size == 0 or b.size % k:
        raise DimensionMismatch(
            f"{b.size} bits cannot be split into {k}-bit symbols",
            summary="bit count must equal U * log2(M)",
        )
    weights = 1 << np.arange(k - 1, -1, -1)
    labels = b.reshape(-1, k) @ weights
    return constellation.points[labels].astype(np.complex128)


def _axisIndex(coordinate: np.ndarray, constellation: Constellation) -> np.ndarray:
    # nearest level on one axis; exact midpoints go to the smaller coordinate
    L = constellation.levelsPerAxis
    u = (coordinate * constellation.scale + (L - 1)) / 2.0
    return np.clip(np.ceil(u - 0.5), 0, L - 1).astype(np.int64)


def slice(
    xSoft: typing.Any, constellation: Constellation
) -> tuple[Bits, CVector]:
    """Hard decision: nearest point per component, ties toward smaller real, then imaginary.

    Returns:
        (bits, symbols): the flattened bit labels and the decided points.

    Raises:
        NumericalOverflow: if any estimate is NaN or infinite.
    """
    x = np.asarray(xSoft, dtype=np.complex128).ravel()
    if not np.all(np.isfinite(x)):
        raise NumericalOverflow(
            f"{int(np.count_nonzero(~np.isfinite(x)))} of {x.size} estimates are not finite",
            summary="the detector diverged; nothing can be decided from its output",
        )
    iIndex = _axisIndex(x.real, constellation)
    qIndex = _axisIndex(x.imag, constellation)
    labels = (constellation._axisLabel[iIndex] << constellation.bitsPerAxis) | (
        constellation._axisLabel[qIndex]
    )
    return constellation.labels[labels].ravel(), constellation.points[labels]


def drawChannel(N: int, U: int, rng: np.random.Generator) -> CMatrix:
    """i.i.d. Rayleigh channel: every entry (g1 + i g2)/sqrt(2), g standard normal."""
    if N < 1 or U < 1:
        raise InvalidParameter(f"channel dimensions must be positive, got {N}x{U}")
    g = rng.standard_normal((2, N, U))
    return (g[0] + 1j * g[1]) / math.sqrt(2.0)


def addNoise(yClean: CVector, sigma2: float, rng: np.random.Generator) -> CVector:
    """Adds circularly symmetric CN(0, sigma2) noise to every component."""
    if sigma2 < 0:
        raise InvalidParameter(f"noise variance must be non-negative, got {sigma2}")
    y = np.asarray(yClean, dtype=np.complex128)
    g = rng.standard_normal((2,) + y.shape)
    return y + math.sqrt(sigma2 / 2.0) * (g[0] + 1j * g[1])


def sigma2FromSnr(snrDb: float, U: int) -> float:
    """Noise variance for an average receive snr per base-station antenna.

    With unit energy symbols and unit variance channel entries E||Hx||^2 / N = U, hence
    sigma2 = U / 10^(snr/10).
    """
    if U < 1:
        raise InvalidParameter(f"user count must be positive, got {U}")
    return U / 10.0 ** (snrDb / 10.0)


def trialRng(masterSeed: int, trialIndex: int) -> np.random.Generator:
    """Private counter-based stream of one trial.

    The stream depends only on (masterSeed, trialIndex), never on the snr point, the
    detector or the worker that runs the trial.
    """
    if masterSeed < 0 or trialIndex < 0:
        raise InvalidParameter(
            f"seed and trial index must be non-negative, got {masterSeed}, {trialIndex}"
        )
    sequence = np.random.SeedSequence(masterSeed, spawn_key=(trialIndex,))
    return np.random.Generator(np.random.Philox(sequence))


def drawLink(
    N: int,
    U: int,
    constellation: Constellation,
    sigma2: float,
    rng: np.random.Generator,
) -> tuple[Bits, CVector, CMatrix, CVector]:
    """One block-fading realization: bits, symbols, channel and noise, in that draw order.

    The noise is drawn at unit scale and multiplied by sqrt(sigma2), so two snr points of
    the same trial see the same normalized noise.
    """
    bits = rng.integers(0, 2, size=U * constellation.bitsPerSymbol, dtype=np.uint8)
    x = modulate(bits, constellation)
    H = drawChannel(N, U, rng)
    n = addNoise(np.zeros(N, dtype=np.complex128), sigma2, rng)
    return bits, x, H, n
