"""Monte-Carlo bit error rate engine.

A sweep runs every detector over the same realizations: trial `i` draws its bits, channel
and noise from a stream keyed by (seed, i) only, so detectors and snr points share common
random numbers. Trials are scheduled in fixed chunks of `TRIAL_CHUNK`; chunks are merged
in index order and early stopping is decided at chunk boundaries, which makes the result
independent of how many workers ran the chunks.
"""
import math
import hashlib
import dataclasses
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from tqdm import tqdm

from . import phy
from .config import settings
from .constants import DEFAULT_STOP_AT_ERRORS, DEFAULT_TARGET_BER, DEFAULT_TRIALS, TRIAL_CHUNK
from .detect import DetectorKind, DetectorSpec, detectSimo, runDetector
from .exceptions import ConfigError, DetectionError, GapUndefined
from .phy import Constellation
from .types import BerRecord, Bits, CMatrix, CVector, GapRow
from .utils import log


@dataclasses.dataclass(frozen=True)
class SweepConfig:
    N: int
    U: int
    modulation: str
    snrDb: tuple[float, ...]
    detectors: tuple[DetectorSpec, ...]
    trials: int = DEFAULT_TRIALS
    masterSeed: int = 1
    stopAtErrors: int | None = DEFAULT_STOP_AT_ERRORS

    def __post_init__(self) -> None:
        if self.N < 1 or self.U < 1:
            raise ConfigError(f"antenna counts must be positive, got {self.N}x{self.U}")
        if self.U > self.N:
            raise ConfigError(f"u ({self.U}) cannot exceed n ({self.N})")
        if self.trials < 1:
            raise ConfigError("trials is less than the minimum value of 1")
        if self.masterSeed < 0:
            raise ConfigError(f"seed must be non-negative, got {self.masterSeed}")
        if self.stopAtErrors is not None and self.stopAtErrors < 1:
            raise ConfigError(f"stop_at_errors must be at least 1, got {self.stopAtErrors}")
        if not self.snrDb:
            raise ConfigError("snr list is empty")
        if any(b <= a for a, b in zip(self.snrDb, self.snrDb[1:])):
            raise ConfigError(f"snr list {list(self.snrDb)} is not strictly increasing")
        if not self.detectors:
            raise ConfigError("no detectors to sweep")
        try:
            self.constellation
        except DetectionError as e:
            raise ConfigError(e.message, summary=e.summary)

    @property
    def constellation(self) -> Constellation:
        return Constellation.fromName(self.modulation)

    @property
    def label(self) -> str:
        return f"{self.N}x{self.U} {self.modulation}"


@dataclasses.dataclass(frozen=True)
class Realization:
    bits: Bits
    x: CVector
    H: CMatrix
    noise: CVector
    y: CVector
    sigma2: float

    def digest(self) -> str:
        """sha256 over (bits, H, n); equal digests mean common random numbers."""
        h = hashlib.sha256()
        for array in (self.bits, self.H, self.noise):
            h.update(np.ascontiguousarray(array).tobytes())
        return h.hexdigest()


@dataclasses.dataclass
class TrialOutcome:
    bitErrors: int
    bits: int
    failed: bool = False
    diverged: bool = False


def drawRealization(config: SweepConfig, snrDb: float, trialIndex: int) -> Realization:
    sigma2 = phy.sigma2FromSnr(snrDb, config.U)
    bits, x, H, n = phy.drawLink(
        config.N,
        config.U,
        config.constellation,
        sigma2,
        phy.trialRng(config.masterSeed, trialIndex),
    )
    return Realization(bits=bits, x=x, H=H, noise=n, y=H @ x + n, sigma2=sigma2)


def _detectOne(
    detector: DetectorSpec, realization: Realization, constellation: Constellation
) -> TrialOutcome:
    total = realization.bits.size
    try:
        if detector.kind == DetectorKind.SIMO:
            result = detectSimo(realization.H, realization.x, realization.noise)
        else:
            result = runDetector(
                detector,
                realization.H,
                realization.y,
                realization.sigma2,
                box=constellation.box,
            )
        # non-finite estimates surface here when checkFinite is off
        decided, _ = phy.slice(result.xSoft, constellation)
    except ConfigError:
        raise
    except DetectionError:
        # the whole trial is lost; count it rather than abort the sweep
        return TrialOutcome(bitErrors=total, bits=total, failed=True)

    return TrialOutcome(
        bitErrors=int(np.count_nonzero(decided != realization.bits)),
        bits=total,
        diverged=result.diverged,
    )


def runTrial(
    config: SweepConfig, snrDb: float, detector: DetectorSpec, trialIndex: int
) -> TrialOutcome:
    """One realization through one detector: draw, detect, slice, count bit errors.

    Detector failures are returned as a failed outcome with every bit in error.
    """
    return _detectOne(
        detector, drawRealization(config, snrDb, trialIndex), config.constellation
    )


# (errors, bits, trials, failures, divergences) per detector
_Tally = list[int]


def _runChunk(
    job: tuple[SweepConfig, float, tuple[int, ...], int, int]
) -> list[_Tally]:
    config, snrDb, active, start, stop = job
    constellation = config.constellation
    tallies = [[0, 0, 0, 0, 0] for _ in active]

    for index in range(start, stop):
        realization = drawRealization(config, snrDb, index)
        for slot, d in enumerate(active):
            outcome = _detectOne(config.detectors[d], realization, constellation)
            tally = tallies[slot]
            tally[0] += outcome.bitErrors
            tally[1] += outcome.bits
            tally[2] += 1
            tally[3] += int(outcome.failed)
            tally[4] += int(outcome.diverged)

    return tallies


def curveName(detector: str, params: str) -> str:
    return f"{detector}({params})" if params else detector


def _record(
    config: SweepConfig, detector: DetectorSpec, snrDb: float, tally: list[int]
) -> BerRecord:
    errors, bits, trials, failures, divergences = tally
    ber = errors / bits if bits else 0.0
    return BerRecord(
        n=config.N,
        u=config.U,
        mod=config.modulation,
        detector=detector.name,
        params=detector.params,
        snrDb=snrDb,
        trialsRun=trials,
        bitErrors=errors,
        bitsTotal=bits,
        ber=ber,
        stderr=math.sqrt(ber * (1.0 - ber) / bits) if bits else 0.0,
        failures=failures,
        divergences=divergences,
    )


def runSweep(
    config: SweepConfig, threads: int | None = None, progress: bool = True
) -> list[BerRecord]:
    """Every (snr, detector) point of the sweep, snr-major in config order.

    A detector stops at the first chunk boundary where it has accumulated
    `stopAtErrors` bit errors; the others keep running.
    """
    workers = max(1, threads or settings.threads)
    chunks = [
        (start, min(start + TRIAL_CHUNK, config.trials))
        for start in range(0, config.trials, TRIAL_CHUNK)
    ]
    records: list[BerRecord] = []

    bar = tqdm(
        total=len(config.snrDb) * len(chunks),
        desc=config.label,
        unit="chunk",
        disable=not progress,
        leave=False,
    )
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None

    try:
        for snrDb in config.snrDb:
            tallies = [[0, 0, 0, 0, 0] for _ in config.detectors]
            active = list(range(len(config.detectors)))
            position = 0

            while position < len(chunks) and active:
                batch = chunks[position : position + workers]
                jobs = [(config, snrDb, tuple(active), s, e) for s, e in batch]
                results = (
                    executor.map(_runChunk, jobs) if executor else map(_runChunk, jobs)
                )

                for (start, _), result in zip(batch, results):
                    # a detector that stopped in an earlier chunk of this batch
                    # ignores the rest, exactly as a sequential run would
                    for d, tally in zip(jobs[0][2], result):
                        if d not in active:
                            continue
                        tallies[d] = [a + b for a, b in zip(tallies[d], tally)]
                    if config.stopAtErrors is not None:
                        active = [
                            d for d in active if tallies[d][0] < config.stopAtErrors
                        ]
                    position += 1
                    bar.update(1)
                    if not active:
                        break

            bar.update(len(chunks) - position)
            for d, detector in enumerate(config.detectors):
                records.append(_record(config, detector, snrDb, tallies[d]))
    finally:
        bar.close()
        if executor:
            executor.shutdown()

    _reportProblems(records)
    return records


def _reportProblems(records: list[BerRecord]) -> None:
    for record in records:
        name = curveName(record["detector"], record["params"])
        if record["failures"]:
            log.warn(
                f"{name} failed on {record['failures']} trials at {record['snrDb']:g} dB"
            )
        if record.get("divergences"):
            log.warn(
                f"{name} series diverged on {record['divergences']} trials at {record['snrDb']:g} dB"
            )


def curves(records: list[BerRecord]) -> dict[str, list[BerRecord]]:
    """Records grouped by detector curve, each sorted by snr."""
    grouped: dict[str, list[BerRecord]] = {}
    for record in records:
        grouped.setdefault(curveName(record["detector"], record["params"]), []).append(
            record
        )
    return {k: sorted(v, key=lambda r: r["snrDb"]) for k, v in grouped.items()}


def _logBer(record: BerRecord) -> float:
    # zero error points are clamped to half an error so the log stays finite
    floor = 0.5 / record["bitsTotal"] if record["bitsTotal"] else 1e-300
    return math.log10(max(record["ber"], floor))


def snrAtBer(curve: list[BerRecord], target: float) -> float:
    """Snr where the curve first falls through `target`, log-linear interpolation.

    Raises:
        GapUndefined: if the curve never crosses the target inside the simulated range.
    """
    if not curve:
        raise GapUndefined("empty curve")
    if not 0 < target < 1:
        raise GapUndefined(f"target ber {target} is outside (0, 1)")

    logTarget = math.log10(target)
    name = curveName(curve[0]["detector"], curve[0]["params"])

    if _logBer(curve[0]) < logTarget:
        raise GapUndefined(
            f"{name} is already below ber {target:g} at {curve[0]['snrDb']:g} dB",
            summary="extend the snr range downwards",
        )

    for low, high in zip(curve, curve[1:]):
        a, b = _logBer(low), _logBer(high)
        if a >= logTarget > b:
            fraction = (a - logTarget) / (a - b)
            return low["snrDb"] + fraction * (high["snrDb"] - low["snrDb"])

    if _logBer(curve[-1]) == logTarget:
        return float(curve[-1]["snrDb"])

    raise GapUndefined(
        f"{name} never reaches ber {target:g} (lowest {min(r['ber'] for r in curve):.3g})",
        summary="the curve floors above the target or the snr range is too short",
    )


def _gapRow(
    grouped: dict[str, list[BerRecord]], reference: str, detector: str, target: float
) -> GapRow:
    row = GapRow(
        reference=reference,
        detector=detector,
        targetBer=target,
        snrReference=None,
        snrDetector=None,
        gapDb=None,
        note=None,
    )
    try:
        row["snrReference"] = snrAtBer(grouped[reference], target)
        row["snrDetector"] = snrAtBer(grouped[detector], target)
        row["gapDb"] = row["snrDetector"] - row["snrReference"]
    except GapUndefined as e:
        row["note"] = e.message
    return row


def gapProfile(
    records: list[BerRecord], reference: str, detector: str, targets: list[float]
) -> list[GapRow]:
    """Gap of `detector` against `reference` at several target bers."""
    grouped = curves(records)
    for name in (reference, detector):
        if name not in grouped:
            raise ConfigError(f"no curve named '{name}' in the records")
    return [_gapRow(grouped, reference, detector, target) for target in targets]


def defaultReference(records: list[BerRecord]) -> str:
    grouped = curves(records)
    for name, curve in grouped.items():
        if curve[0]["detector"] in ("MMSE", "ZF"):
            return name
    return next(iter(grouped))


def summarize(
    records: list[BerRecord],
    reference: str | None = None,
    targets: list[float] | None = None,
) -> list[GapRow]:
    """Horizontal gap of every curve to the reference curve at each target ber.

    Positive gaps mean the detector needs more snr than the reference. Curves that never
    cross a target get a row with empty values and the reason in `note`.
    """
    if not records:
        return []
    grouped = curves(records)
    reference = reference or defaultReference(records)
    if reference not in grouped:
        raise ConfigError(f"reference curve '{reference}' is not part of the sweep")

    rows: list[GapRow] = []
    for target in targets or [DEFAULT_TARGET_BER]:
        for name in grouped:
            if name == reference:
                continue
            row = _gapRow(grouped, reference, name, target)
            if row["note"]:
                log.warn(f"gap {name} vs {reference} at {target:g}: {row['note']}")
            rows.append(row)
    return rows
