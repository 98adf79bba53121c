import enum
import typing
import dataclasses

from mimodet.core import OpCount
from mimodet.types import CVector
from mimodet import constants
from mimodet.exceptions import ConfigError


class DetectorKind(enum.Enum):
    ZF = "ZF"
    MMSE = "MMSE"
    NSA = "NSA"
    GS = "GS"
    CG = "CG"
    ADMIN = "ADMIN"
    SIMO = "SIMO"  # interference-free bound, evaluated on the sweep's realization

    @staticmethod
    def exact():
        return [DetectorKind.ZF, DetectorKind.MMSE]

    @staticmethod
    def approximate():
        return [DetectorKind.NSA, DetectorKind.GS, DetectorKind.CG]

    @staticmethod
    def iterative():
        return [*DetectorKind.approximate(), DetectorKind.ADMIN]


class Backend(enum.Enum):
    QR = "QR"
    CHOLESKY = "CHOLESKY"
    LDL = "LDL"
    DIRECT = "DIRECT"


# short names accepted in detector tokens and experiment files
BACKEND_ALIASES: dict[str, Backend] = {
    "qr": Backend.QR,
    "chol": Backend.CHOLESKY,
    "cholesky": Backend.CHOLESKY,
    "ldl": Backend.LDL,
    "direct": Backend.DIRECT,
}

GsInit: typing.TypeAlias = typing.Literal["zero"] | typing.Literal["diagonal"]


@dataclasses.dataclass(frozen=True)
class DetectorSpec:
    """Algorithm selector plus its parameters.

    `iterations` is ignored by ZF/MMSE, `backend` by NSA/GS/CG. ADMIN always factors with
    LDL; its beta defaults to `betaScale * sigma2` unless given explicitly.
    """

    kind: DetectorKind
    backend: Backend = Backend.CHOLESKY
    iterations: int = constants.DEFAULT_ITERATIONS
    beta: float | None = None
    betaScale: float = 1.0
    gsInit: GsInit = "zero"

    def __post_init__(self) -> None:
        if not isinstance(self.kind, DetectorKind):
            raise ConfigError(f"detector kind {self.kind!r} is not a DetectorKind")
        if not isinstance(self.backend, Backend):
            raise ConfigError(f"backend {self.backend!r} is not a Backend")
        if self.kind in DetectorKind.iterative() and self.iterations < 1:
            raise ConfigError(
                f"{self.kind.value} iterations must be at least 1, got {self.iterations}"
            )
        if self.beta is not None and self.beta <= 0:
            raise ConfigError(f"ADMIN beta must be positive, got {self.beta}")
        if self.betaScale <= 0:
            raise ConfigError(f"ADMIN beta scale must be positive, got {self.betaScale}")
        if self.gsInit not in ("zero", "diagonal"):
            raise ConfigError(f"unknown GS initialization '{self.gsInit}'")

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def params(self) -> str:
        """parameter string written to the `params` csv column"""
        if self.kind in DetectorKind.exact():
            return f"backend={self.backend.value}"
        if self.kind in DetectorKind.approximate():
            extra = ";init=diagonal" if self.gsInit == "diagonal" else ""
            return f"t={self.iterations}{extra}"
        if self.kind == DetectorKind.ADMIN:
            beta = (
                f"beta={self.beta:g}"
                if self.beta is not None
                else f"beta_scale={self.betaScale:g}"
            )
            return f"t={self.iterations};backend=LDL;{beta}"
        return ""

    def __str__(self) -> str:
        return f"{self.name}({self.params})" if self.params else self.name

    @staticmethod
    def fromToken(token: str) -> "DetectorSpec":
        """Parses `mmse:chol`, `zf:qr`, `gs:3`, `admin:5:2.0`, `simo` ...

        Raises:
            ConfigError: naming the token when it cannot be parsed.
        """
        parts = [p.strip() for p in token.strip().lower().split(":")]
        name, args = parts[0], parts[1:]

        try:
            kind = DetectorKind(name.upper())
        except ValueError:
            raise ConfigError(f"unknown detector '{name}' in token '{token}'")

        try:
            if kind in DetectorKind.exact():
                if len(args) > 1:
                    raise ValueError
                backend = BACKEND_ALIASES[args[0]] if args else Backend.CHOLESKY
                return DetectorSpec(kind, backend=backend)

            if kind in DetectorKind.approximate():
                if len(args) > 1:
                    raise ValueError
                t = int(args[0]) if args else constants.DEFAULT_ITERATIONS
                return DetectorSpec(kind, iterations=t)

            if kind == DetectorKind.ADMIN:
                if len(args) > 2:
                    raise ValueError
                t = int(args[0]) if args else constants.DEFAULT_ADMIN_ITERATIONS
                scale = float(args[1]) if len(args) > 1 else 1.0
                return DetectorSpec(
                    kind, backend=Backend.LDL, iterations=t, betaScale=scale
                )

            if args:
                raise ValueError
            return DetectorSpec(kind)
        except (ValueError, KeyError, IndexError):
            raise ConfigError(f"malformed detector token '{token}'")


@dataclasses.dataclass
class DetectResult:
    """Soft estimate before slicing plus what it cost.

    `ops` covers everything after the matched filter (gramian, inversion, iterations);
    the matched filter's 4NU real multiplications are kept apart in `mfOps`.
    """

    xSoft: CVector
    ops: OpCount
    mfOps: OpCount = dataclasses.field(default_factory=OpCount)
    iterates: list[CVector] = dataclasses.field(default_factory=list)
    residualNorms: list[float] = dataclasses.field(default_factory=list)
    diverged: bool = False
    projected: CVector | None = None  # ADMIN: the last box projection z
