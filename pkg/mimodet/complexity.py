"""Real multiplication counts: closed forms against the instrumented implementations.

The decompositions are measured by running them on a random regularized Gramian; their
control flow does not depend on the values, so any seed gives the same count. The
approximate detectors are modelled only.
"""
import enum

import numpy as np

from . import decomp, phy
from .core import CountingConvention, OpCount, STANDARD_CONVENTION
from .constants import COMPLEXITY_USERS, DEFAULT_ITERATIONS
from .exceptions import InvalidParameter
from .types import ComplexityRow
from .utils import log


class Algorithm(enum.Enum):
    QR = "QR"
    CHOLESKY = "CHOLESKY"
    LDL = "LDL"
    NSA = "NSA"
    GS = "GS"
    CG = "CG"

    @staticmethod
    def decompositions():
        return [Algorithm.QR, Algorithm.CHOLESKY, Algorithm.LDL]

    @staticmethod
    def approximate():
        return [Algorithm.NSA, Algorithm.GS, Algorithm.CG]


# published operation counts (sqrt, reciprocal, mul, add, sub) per users and algorithm.
# the Gram-Schmidt multiplications follow U^2 (4U + 6), not the closed form U^2 (4U + 2)
tableTwoReference: dict[int, dict[Algorithm, tuple[int, int, int, int, int]]] = {
    8: {
        Algorithm.QR: (8, 8, 2432, 604, 576),
        Algorithm.CHOLESKY: (8, 8, 392, 42, 36),
        Algorithm.LDL: (0, 8, 560, 42, 36),
    },
    16: {
        Algorithm.QR: (16, 16, 17920, 4532, 4352),
        Algorithm.CHOLESKY: (16, 16, 2960, 210, 136),
        Algorithm.LDL: (0, 16, 3680, 210, 136),
    },
    32: {
        Algorithm.QR: (32, 32, 137216, 34660, 33792),
        Algorithm.CHOLESKY: (32, 32, 22816, 930, 528),
        Algorithm.LDL: (0, 32, 25792, 930, 528),
    },
}


def formulaRm(algorithm: Algorithm, U: int, t: int = DEFAULT_ITERATIONS) -> int:
    """Closed-form real multiplication count.

    QR          U^2 (4U + 2)
    CHOLESKY    (2U^3 + 3U^2 - 5U) / 3
    LDL         (2U^3 + 12U^2 - 14U) / 3
    NSA         (t - 1)(2U^3 + 2U^2 - 2U)
    GS          6 t U^2
    CG          (t + 1)(4U^2 + 20U)

    The two divisions by three are exact for every integer U.
    """
    if U < 1:
        raise InvalidParameter(f"user count must be positive, got {U}")
    if t < 1:
        raise InvalidParameter(f"iteration count must be positive, got {t}")

    match algorithm:
        case Algorithm.QR:
            return U * U * (4 * U + 2)
        case Algorithm.CHOLESKY:
            return (2 * U**3 + 3 * U**2 - 5 * U) // 3
        case Algorithm.LDL:
            return (2 * U**3 + 12 * U**2 - 14 * U) // 3
        case Algorithm.NSA:
            return (t - 1) * (2 * U**3 + 2 * U**2 - 2 * U)
        case Algorithm.GS:
            return 6 * t * U * U
        case Algorithm.CG:
            return (t + 1) * (4 * U * U + 20 * U)

    raise InvalidParameter(f"unknown algorithm {algorithm!r}")


def randomGramian(U: int, seed: int) -> np.ndarray:
    """H^H H + I for an i.i.d. Rayleigh 2U x U channel; always positive definite."""
    H = phy.drawChannel(2 * U, U, np.random.default_rng(seed))
    G = H.conj().T @ H + np.eye(U)
    return (G + G.conj().T) / 2


def measureRm(
    algorithm: Algorithm,
    U: int,
    seed: int = 0,
    convention: CountingConvention = STANDARD_CONVENTION,
) -> OpCount:
    """Runs the instrumented decomposition once and returns its tally.

    Raises:
        InvalidParameter: for the approximate detectors, which have no measured row.
    """
    if algorithm not in Algorithm.decompositions():
        raise InvalidParameter(
            f"{algorithm.value} is modelled only",
            summary="measured counts exist for QR, CHOLESKY and LDL",
        )

    acc = OpCount(convention=convention)
    G = randomGramian(U, seed)

    if algorithm == Algorithm.QR:
        decomp.gramSchmidtQr(G, acc)
    elif algorithm == Algorithm.CHOLESKY:
        decomp.cholesky(G, acc)
    else:
        decomp.ldl(G, acc)
    return acc


def comparisonTable(
    uList: list[int] | None = None,
    t: int = DEFAULT_ITERATIONS,
    seed: int = 0,
) -> list[ComplexityRow]:
    """Rows of (U, algorithm, t, formula, measured) for every algorithm and U."""
    rows: list[ComplexityRow] = []

    if t == 1:
        log.warn("t=1: the NSA model is a pure diagonal inverse and counts 0 multiplications")

    for U in uList or COMPLEXITY_USERS:
        for algorithm in Algorithm:
            measured = (
                measureRm(algorithm, U, seed).realMul
                if algorithm in Algorithm.decompositions()
                else None
            )
            note = (
                "t=1 leaves only the diagonal inverse"
                if algorithm == Algorithm.NSA and t == 1
                else None
            )
            rows.append(
                ComplexityRow(
                    u=U,
                    algorithm=algorithm.value,
                    t=t,
                    formulaRm=formulaRm(algorithm, U, t),
                    measuredRm=measured,
                    note=note,
                )
            )
    return rows
