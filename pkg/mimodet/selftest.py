"""Fast invariant suite run by `mimodet selftest`."""
import typing

import numpy as np

from . import decomp, phy
from .complexity import Algorithm, formulaRm, measureRm, randomGramian, tableTwoReference
from .core import CountingConvention, OpCount, STANDARD_CONVENTION
from .detect import Backend, DetectorKind, DetectorSpec, detectCg, detectLinear
from .exceptions import DetectionError
from .types import SelftestRow


def _row(check: str, expected: typing.Any, measured: typing.Any, passed: bool) -> SelftestRow:
    return SelftestRow(check=check, expected=str(expected), measured=str(measured), passed=bool(passed))


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def _opCounts(convention: CountingConvention) -> list[SelftestRow]:
    rows = []
    for U, published in tableTwoReference.items():
        cholesky = published[Algorithm.CHOLESKY][2]
        measured = measureRm(Algorithm.CHOLESKY, U, convention=convention).realMul
        rows.append(_row(f"cholesky real_mul U={U}", cholesky, measured, measured == cholesky))

    for algorithm in (Algorithm.QR, Algorithm.LDL):
        for U in (2, 8, 16, 32):
            expected = formulaRm(algorithm, U)
            measured = measureRm(algorithm, U, convention=convention).realMul
            rows.append(
                _row(f"{algorithm.value.lower()} real_mul U={U}", expected, measured, measured == expected)
            )
    return rows


def _decompositions(seed: int) -> list[SelftestRow]:
    worst = {"qr": 0.0, "q^h q": 0.0, "cholesky": 0.0, "ldl": 0.0}
    for index, U in enumerate((2, 4, 8, 16, 32)):
        G = randomGramian(U, seed + index)
        acc = OpCount()

        qr = decomp.gramSchmidtQr(G, acc)
        worst["qr"] = max(worst["qr"], _relative(qr.Q @ qr.R, G))
        worst["q^h q"] = max(
            worst["q^h q"], float(np.max(np.abs(qr.Q.conj().T @ qr.Q - np.eye(U))))
        )

        L = decomp.cholesky(G, acc).L
        worst["cholesky"] = max(worst["cholesky"], _relative(L @ L.conj().T, G))

        f = decomp.ldl(G, acc)
        worst["ldl"] = max(worst["ldl"], _relative(f.L @ np.diag(f.D) @ f.L.conj().T, G))

    return [_row(f"{name} residual", "<= 1e-10", f"{value:.2e}", value <= 1e-10) for name, value in worst.items()]


def _backends(seed: int) -> list[SelftestRow]:
    rng = np.random.default_rng(seed)
    constellation = phy.Constellation(64)
    worst = 0.0
    for _ in range(20):
        H = phy.drawChannel(32, 16, rng)
        bits = rng.integers(0, 2, 16 * constellation.bitsPerSymbol)
        sigma2 = phy.sigma2FromSnr(20.0, 16)
        y = phy.addNoise(H @ phy.modulate(bits, constellation), sigma2, rng)
        estimates = [
            detectLinear(H, y, sigma2, DetectorSpec(DetectorKind.MMSE, backend=b)).xSoft
            for b in Backend
        ]
        reference = estimates[-1]
        worst = max(worst, *(_relative(e, reference) for e in estimates[:-1]))
    return [_row("mmse backend agreement", "<= 1e-8", f"{worst:.2e}", worst <= 1e-8)]


def _iterative(seed: int) -> list[SelftestRow]:
    rng = np.random.default_rng(seed)
    H = phy.drawChannel(64, 16, rng)
    y = phy.addNoise(np.zeros(64), 1.0, rng) + H @ np.ones(16)
    exact = detectLinear(H, y, 0.5, DetectorSpec(DetectorKind.MMSE)).xSoft
    cg = detectCg(H, y, 0.5, 16).xSoft
    error = _relative(cg, exact)
    return [_row("cg finite termination t=U", "<= 1e-8", f"{error:.2e}", error <= 1e-8)]


def _roundTrip() -> list[SelftestRow]:
    rows = []
    for order in (4, 16, 64):
        c = phy.Constellation(order)
        bits = c.labels.ravel()
        decided, _ = phy.slice(phy.modulate(bits, c), c)
        same = bool(np.array_equal(decided, bits))
        rows.append(
            _row(f"{c.name} modulate/slice", "identity", "identity" if same else "mismatch", same)
        )
    return rows


def runSelftest(
    convention: CountingConvention = STANDARD_CONVENTION, seed: int = 2024
) -> list[SelftestRow]:
    """All checks; numerical exceptions turn into failed rows."""
    rows: list[SelftestRow] = []
    for name, check in (
        ("operation counts", lambda: _opCounts(convention)),
        ("decompositions", lambda: _decompositions(seed)),
        ("backends", lambda: _backends(seed)),
        ("iterative", lambda: _iterative(seed)),
        ("constellations", _roundTrip),
    ):
        try:
            rows.extend(check())
        except DetectionError as e:
            rows.append(_row(name, "no error", e.errorCode or e.message, False))
    return rows
