"""CSV writers for every result file.

Numbers are formatted by hand (never through the locale): integers as plain digits, floats
in python's shortest round-trip form, missing values as empty fields.
"""
import os
import csv
import typing

from mimodet.types import BerRecord, ComplexityRow, GapRow

BER_HEADER = [
    "n",
    "u",
    "mod",
    "detector",
    "params",
    "snr_db",
    "trials",
    "bit_errors",
    "bits",
    "ber",
    "stderr",
]
SUMMARY_HEADER = [
    "reference",
    "detector",
    "target_ber",
    "snr_reference",
    "snr_detector",
    "gap_db",
    "note",
]
COMPLEXITY_HEADER = ["U", "algorithm", "t", "formula_rm", "measured_rm"]


def formatNumber(value: typing.Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def _write(path: str, header: list[str], rows: typing.Iterable[list[typing.Any]]) -> str:
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)

    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(
                [cell if isinstance(cell, str) else formatNumber(cell) for cell in row]
            )
    return path


def berFileName(n: int, u: int, mod: str) -> str:
    return f"ber_{n}x{u}_{mod}.csv"


def summaryFileName(n: int, u: int, mod: str) -> str:
    return f"summary_{n}x{u}_{mod}.csv"


def writeBer(path: str, records: list[BerRecord]) -> str:
    return _write(
        path,
        BER_HEADER,
        (
            [
                r["n"],
                r["u"],
                r["mod"],
                r["detector"],
                r["params"],
                float(r["snrDb"]),
                r["trialsRun"],
                r["bitErrors"],
                r["bitsTotal"],
                r["ber"],
                r["stderr"],
            ]
            for r in records
        ),
    )


def writeSummary(path: str, rows: list[GapRow]) -> str:
    return _write(
        path,
        SUMMARY_HEADER,
        (
            [
                r["reference"],
                r["detector"],
                r["targetBer"],
                r["snrReference"],
                r["snrDetector"],
                r["gapDb"],
                r["note"] or "",
            ]
            for r in rows
        ),
    )


def writeComplexity(path: str, rows: list[ComplexityRow]) -> str:
    return _write(
        path,
        COMPLEXITY_HEADER,
        (
            [r["u"], r["algorithm"], r["t"], r["formulaRm"], r["measuredRm"]]
            for r in rows
        ),
    )


def readRows(path: str) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))
