import typing

import numpy as np
import numpy.typing as npt
from typing_extensions import NotRequired

CMatrix: typing.TypeAlias = npt.NDArray[np.complex128]
CVector: typing.TypeAlias = npt.NDArray[np.complex128]
RVector: typing.TypeAlias = npt.NDArray[np.float64]
Bits: typing.TypeAlias = npt.NDArray[np.uint8]

ModulationName: typing.TypeAlias = (
    typing.Literal["qpsk"] | typing.Literal["16qam"] | typing.Literal["64qam"]
)


class BerRecord(typing.TypedDict):
    """One (configuration, snr, detector) row of a sweep"""

    n: int
    u: int
    mod: str
    detector: str
    params: str
    snrDb: float
    trialsRun: int
    bitErrors: int
    bitsTotal: int
    ber: float
    stderr: float  # binomial standard error of ber
    failures: int  # trials where the detector raised; all their bits count as errors
    divergences: NotRequired[int]


class GapRow(typing.TypedDict):
    """horizontal snr distance between two curves at one target ber"""

    reference: str
    detector: str
    targetBer: float
    snrReference: float | None
    snrDetector: float | None
    gapDb: float | None
    note: str | None


class ComplexityRow(typing.TypedDict):
    u: int
    algorithm: str
    t: int
    formulaRm: int
    measuredRm: int | None  # AID rows are modelled only
    note: NotRequired[str | None]


class SelftestRow(typing.TypedDict):
    check: str
    expected: str
    measured: str
    passed: bool
