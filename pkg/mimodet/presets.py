"""Named experiments: the six published scenarios at desk scale.

fig2..fig6 are BER sweeps; fig7 is the complexity comparison.
"""
import typing

from .constants import COMPLEXITY_USERS, DEFAULT_ADMIN_ITERATIONS, DEFAULT_ITERATIONS
from .exceptions import ConfigError
from .utils.dto import SnrRange

_AIDS = [f"nsa:{DEFAULT_ITERATIONS}", f"gs:{DEFAULT_ITERATIONS}", f"cg:{DEFAULT_ITERATIONS}"]
_ADMIN = ["mmse:qr", f"admin:{DEFAULT_ADMIN_ITERATIONS}", "simo"]
# beta = 4 sigma2; with beta = sigma2 five iterations stay next to the MMSE estimate
_ADMIN_64QAM = ["mmse:qr", f"admin:{DEFAULT_ADMIN_ITERATIONS}:4", "simo"]


class SweepPreset(typing.TypedDict):
    n: int
    u: int
    mod: str
    snr: str
    detectors: list[str]
    targets: list[float]  # ber levels the summary reports gaps at


class ComplexityPreset(typing.TypedDict):
    u: list[int]
    t: int


SWEEPS: dict[str, SweepPreset] = {
    "fig2": SweepPreset(
        n=256, u=16, mod="64qam", snr="-6:2:14",
        detectors=["mmse:qr", *_AIDS], targets=[1e-2],
    ),
    "fig3": SweepPreset(
        n=32, u=16, mod="64qam", snr="0:2:30",
        detectors=["mmse:qr", *_AIDS], targets=[1e-2, 1e-1],
    ),
    "fig4": SweepPreset(
        n=64, u=16, mod="64qam", snr="0:2:30",
        detectors=["mmse:qr", *_AIDS], targets=[1e-2],
    ),
    "fig5": SweepPreset(
        n=32, u=32, mod="64qam", snr="11:3:41",
        detectors=_ADMIN_64QAM, targets=[3e-2, 1e-2],
    ),
    "fig6": SweepPreset(
        n=32, u=32, mod="qpsk", snr="0:2:30",
        detectors=_ADMIN, targets=[1e-2, 1e-3],
    ),
}  # fmt: skip

COMPLEXITY: dict[str, ComplexityPreset] = {
    "fig7": ComplexityPreset(u=list(COMPLEXITY_USERS), t=DEFAULT_ITERATIONS),
}


def names() -> list[str]:
    return sorted([*SWEEPS, *COMPLEXITY])


def sweepPreset(name: str) -> SweepPreset:
    try:
        preset = SWEEPS[name.lower()]
    except KeyError:
        raise ConfigError(
            f"preset '{name}' is not a ber sweep",
            summary=f"ber presets: {', '.join(sorted(SWEEPS))}",
        )
    SnrRange.parse(preset["snr"], f"{name}.snr")
    return SweepPreset(**{**preset, "detectors": list(preset["detectors"])})


def complexityPreset(name: str) -> ComplexityPreset:
    try:
        preset = COMPLEXITY[name.lower()]
    except KeyError:
        raise ConfigError(
            f"preset '{name}' is not a complexity table",
            summary=f"complexity presets: {', '.join(sorted(COMPLEXITY))}",
        )
    return ComplexityPreset(u=list(preset["u"]), t=preset["t"])
