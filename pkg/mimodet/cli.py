"""Command line front end.

    mimodet ber --preset fig2 --seed 1
    mimodet ber --n 8 --u 8 --mod qpsk --snr 0:2:20 --det mmse:chol --trials 100 --seed 7
    mimodet ber --config experiment.json --threads 4
    mimodet complexity --u 4,8,16,32,64,128 --t 3
    mimodet selftest
    mimodet constellation --mod 16qam
    mimodet schema > experiment-rules.json

Exit codes: 0 success, 1 failed selftest, 2 configuration error, 3 numerical failure.
"""
import os
import sys
import json
import typing
import argparse

from colorama import Fore, Style

from . import presets
from .constants import (
    DEFAULT_STOP_AT_ERRORS,
    DEFAULT_TARGET_BER,
    DEFAULT_ITERATIONS,
    DEFAULT_TRIALS,
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_SELFTEST_FAILED,
)
from .complexity import comparisonTable
from .core import CountingConvention, STANDARD_CONVENTION
from .detect import DetectorSpec
from .exceptions import ConfigError, DetectionError
from .montecarlo import SweepConfig, runSweep, summarize
from .phy import Constellation
from .selftest import runSelftest
from .utils import csvio, log
from .utils.dto import (
    Choice,
    DetectorToken,
    Dictionary,
    List,
    Number,
    SnrRange,
    String,
)

MODULATIONS = ["qpsk", "16qam", "64qam"]
DEFAULT_OUTPUT = "results"

# multiplier used by `selftest --corrupt-counting` as a negative control
CORRUPTED_CONVENTION = CountingConvention(complexMul=3)


def sweepRule(name: str = "value") -> Dictionary:
    return Dictionary(
        {
            "n": Number(integer_only=True, minimum=1),
            "u": Number(integer_only=True, minimum=1),
            "mod": Choice(MODULATIONS),
            "snr": SnrRange(),
            "detectors": List(DetectorToken(), min_length=1),
            "trials": Number(integer_only=True, minimum=1, nullable=True),
            "seed": Number(integer_only=True, minimum=0, nullable=True),
            "stop_at_errors": Number(integer_only=True, minimum=0, nullable=True),
            "targets": List(
                Number(minimum=0, maximum=1), nullable=True, min_length=1
            ),
        },
        _name=name,
    )


def experimentRule() -> Dictionary:
    return Dictionary(
        {
            "output_dir": String(nullable=True, min_length=1),
            "sweeps": List(sweepRule(), nullable=True),
            "complexity": Dictionary(
                {
                    "u": List(Number(integer_only=True, minimum=1), min_length=1),
                    "t": Number(integer_only=True, minimum=1, nullable=True),
                },
                nullable=True,
            ),
        }
    )


def loadExperiment(path: str) -> dict[str, typing.Any]:
    """Reads and validates an experiment file.

    Raises:
        ConfigError: naming the offending field.
    """
    try:
        with open(path, encoding="utf-8") as handle:
            experiment = json.load(handle)
    except FileNotFoundError:
        raise ConfigError(f"config file '{path}' does not exist")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file '{path}' is not valid json: {e.msg} (line {e.lineno})")

    experimentRule().validate(experiment)
    return experiment


def _splitTokens(values: list[str] | None) -> list[str] | None:
    if not values:
        return None
    return [token for value in values for token in value.split(",") if token.strip()]


def _flagOverrides(args: argparse.Namespace) -> dict[str, typing.Any]:
    flags = {
        "n": args.n,
        "u": args.u,
        "mod": args.mod,
        "snr": args.snr,
        "detectors": _splitTokens(args.det),
        "trials": args.trials,
        "seed": args.seed,
        "stop_at_errors": args.stop_at_errors,
        "targets": args.target_ber,
    }
    return {key: value for key, value in flags.items() if value is not None}


def buildSweep(
    entry: dict[str, typing.Any], name: str = "value"
) -> tuple[SweepConfig, list[float]]:
    """Validated sweep entry to (SweepConfig, target bers)."""
    sweepRule(name).validate(entry)
    stop = entry.get("stop_at_errors", DEFAULT_STOP_AT_ERRORS)

    config = SweepConfig(
        N=entry["n"],
        U=entry["u"],
        modulation=entry["mod"].lower(),
        snrDb=tuple(SnrRange.parse(entry["snr"])),
        detectors=tuple(DetectorSpec.fromToken(t) for t in entry["detectors"]),
        trials=entry.get("trials") or DEFAULT_TRIALS,
        masterSeed=entry["seed"] if entry.get("seed") is not None else 1,
        stopAtErrors=stop if stop else None,
    )
    return config, list(entry.get("targets") or [DEFAULT_TARGET_BER])


def resolveSweeps(
    args: argparse.Namespace,
) -> tuple[list[tuple[SweepConfig, list[float]]], str]:
    """Preset, then config file, then flags; later sources override earlier ones."""
    overrides = _flagOverrides(args)
    outputDir = args.out

    if args.preset:
        preset = presets.sweepPreset(args.preset)
        if args.seed is None:
            log.warn(f"{args.preset} runs with seed 1; pass --seed to make the run citable")
        base = {
            "n": preset["n"],
            "u": preset["u"],
            "mod": preset["mod"],
            "snr": preset["snr"],
            "detectors": preset["detectors"],
            "targets": preset["targets"],
        }
        entries = [(args.preset, {**base, **overrides})]
    elif args.config:
        experiment = loadExperiment(args.config)
        outputDir = outputDir or experiment.get("output_dir")
        sweeps = experiment.get("sweeps") or []
        if not sweeps:
            raise ConfigError(f"sweeps is empty in '{args.config}'")
        entries = [(f"sweeps[{i}]", {**s, **overrides}) for i, s in enumerate(sweeps)]
    else:
        entries = [("value", overrides)]

    return [buildSweep(entry, name) for name, entry in entries], outputDir or DEFAULT_OUTPUT


def cmdBer(args: argparse.Namespace) -> int:
    """Runs every requested sweep and writes its ber and summary csv files."""
    sweeps, outputDir = resolveSweeps(args)

    for config, targets in sweeps:
        log.info(
            f"{config.label}: {len(config.detectors)} detectors, {len(config.snrDb)} snr points, "
            f"{config.trials} trials, seed {config.masterSeed}"
        )
        records = runSweep(config, threads=args.threads, progress=not args.quiet)

        name = config.modulation
        berPath = csvio.writeBer(
            os.path.join(outputDir, csvio.berFileName(config.N, config.U, name)), records
        )
        summaryPath = csvio.writeSummary(
            os.path.join(outputDir, csvio.summaryFileName(config.N, config.U, name)),
            summarize(records, targets=targets),
        )
        log.success(f"wrote {berPath} and {summaryPath}")

    return EXIT_OK


def _parseUsers(text: str) -> list[int]:
    try:
        users = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"u list '{text}' must be comma separated integers")
    if not users or any(u < 1 for u in users):
        raise ConfigError(f"u list '{text}' must hold positive integers")
    return users


def cmdComplexity(args: argparse.Namespace) -> int:
    """Writes complexity.csv: formula and measured real multiplications per U."""
    users: list[int] | None = None
    t = args.t
    outputDir = args.out

    if args.preset:
        preset = presets.complexityPreset(args.preset)
        users, t = preset["u"], t or preset["t"]
    elif args.config:
        experiment = loadExperiment(args.config)
        outputDir = outputDir or experiment.get("output_dir")
        section = experiment.get("complexity") or {}
        users, t = section.get("u"), t or section.get("t")

    if args.u:
        users = _parseUsers(args.u)
    if t is not None and t < 1:
        raise ConfigError("t is less than the minimum value of 1")

    rows = comparisonTable(users, t or DEFAULT_ITERATIONS)
    for row in rows:
        if row.get("note"):
            log.warn(f"{row['algorithm']} U={row['u']}: {row['note']}")

    path = csvio.writeComplexity(os.path.join(outputDir or DEFAULT_OUTPUT, "complexity.csv"), rows)
    log.success(f"wrote {path}")
    return EXIT_OK


def cmdSelftest(args: argparse.Namespace) -> int:
    """Prints the invariant report; exit 1 when any check fails."""
    convention = CORRUPTED_CONVENTION if args.corrupt_counting else STANDARD_CONVENTION
    rows = runSelftest(convention)

    width = max(len(row["check"]) for row in rows)
    for row in rows:
        colour, verdict = (Fore.GREEN, "PASS") if row["passed"] else (Fore.RED, "FAIL")
        print(
            colour,
            verdict,
            Style.RESET_ALL,
            f"{row['check']:<{width}}  expected {row['expected']:<10}  measured {row['measured']}",
        )

    failed = [row for row in rows if not row["passed"]]
    if failed:
        log.error(f"{len(failed)} of {len(rows)} checks failed")
        return EXIT_SELFTEST_FAILED
    log.success(f"all {len(rows)} checks passed")
    return EXIT_OK


def cmdConstellation(args: argparse.Namespace) -> int:
    constellation = Constellation.fromName(args.mod)
    path = args.out or f"constellation_{constellation.name}.csv"
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    constellation.toCsv(path)
    log.success(f"wrote {path}")
    return EXIT_OK


def cmdSchema(args: argparse.Namespace) -> int:
    """Prints the rules an experiment file is validated against."""
    print(json.dumps(experimentRule().toJson(), indent=2))
    return EXIT_OK


def buildParser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mimodet",
        description="massive MIMO detector BER sweeps and complexity tables",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true", help="no progress bar or info lines")
    commands = parser.add_subparsers(dest="command", required=True)

    ber = commands.add_parser("ber", parents=[common], help="monte-carlo ber sweep")
    ber.add_argument("--preset", choices=sorted(presets.SWEEPS))
    ber.add_argument("--config", help="json experiment file")
    ber.add_argument("--n", type=int, help="base-station antennas")
    ber.add_argument("--u", type=int, help="users")
    ber.add_argument("--mod", help="qpsk, 16qam or 64qam")
    ber.add_argument("--snr", help="start:step:stop in dB")
    ber.add_argument(
        "--det",
        action="append",
        help="detector token, repeatable or comma separated (mmse:chol, gs:3, admin:5, simo)",
    )
    ber.add_argument("--trials", type=int)
    ber.add_argument("--seed", type=int)
    ber.add_argument("--stop-at-errors", type=int, help="0 disables early stopping")
    ber.add_argument("--target-ber", type=float, action="append")
    ber.add_argument("--threads", type=int, help="worker processes; never changes results")
    ber.add_argument("--out", help="output directory")
    ber.set_defaults(handler=cmdBer)

    complexity = commands.add_parser("complexity", parents=[common], help="real multiplication table")
    complexity.add_argument("--preset", choices=sorted(presets.COMPLEXITY))
    complexity.add_argument("--config", help="json experiment file")
    complexity.add_argument("--u", help="comma separated user counts")
    complexity.add_argument("--t", type=int, help="iterations of the approximate detectors")
    complexity.add_argument("--out", help="output directory")
    complexity.set_defaults(handler=cmdComplexity)

    selftest = commands.add_parser("selftest", parents=[common], help="fast invariant checks")
    selftest.add_argument("--corrupt-counting", action="store_true", help=argparse.SUPPRESS)
    selftest.set_defaults(handler=cmdSelftest)

    constellation = commands.add_parser("constellation", parents=[common], help="write a label table")
    constellation.add_argument("--mod", required=True, choices=MODULATIONS)
    constellation.add_argument("--out", help="csv path")
    constellation.set_defaults(handler=cmdConstellation)

    schema = commands.add_parser("schema", parents=[common], help="experiment file rules as json")
    schema.set_defaults(handler=cmdSchema)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = buildParser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors, which is already the config exit code
        return int(e.code) if isinstance(e.code, int) else EXIT_CONFIG_ERROR

    log.verbose = not args.quiet
    try:
        return args.handler(args)
    except DetectionError as e:
        log.error(e.message if not e.summary else f"{e.message} ({e.summary})")
        return e.exitCode


if __name__ == "__main__":
    sys.exit(main())
