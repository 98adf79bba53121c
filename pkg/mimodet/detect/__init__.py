from mimodet.types import CMatrix, CVector
from mimodet.exceptions import InvalidParameter
from .spec import (
    BACKEND_ALIASES,
    Backend,
    DetectorKind,
    DetectorSpec,
    DetectResult,
)
from .linear import Gramian, detectLinear, gramian, matchedFilter, solveGramian
from .iterative import conjugateGradient, detectCg, detectGs, detectNsa, neumannInverse
from .admin import detectAdmin, detectSimo, simoBound


def runDetector(
    spec: DetectorSpec,
    H: CMatrix,
    y: CVector,
    sigma2: float,
    box: float | None = None,
) -> DetectResult:
    """Dispatches one detection by `spec.kind`.

    `box` is ADMIN's per-axis bound (the constellation's largest coordinate). SIMO needs
    the transmitted symbols and the noise, so it goes through `detectSimo` instead.
    """
    kind = spec.kind

    if kind in DetectorKind.exact():
        return detectLinear(H, y, sigma2, spec)
    if kind == DetectorKind.NSA:
        return detectNsa(H, y, sigma2, spec.iterations)
    if kind == DetectorKind.GS:
        return detectGs(H, y, sigma2, spec.iterations, init=spec.gsInit)
    if kind == DetectorKind.CG:
        return detectCg(H, y, sigma2, spec.iterations)
    if kind == DetectorKind.ADMIN:
        return detectAdmin(
            H,
            y,
            sigma2,
            spec.iterations,
            beta=spec.beta,
            box=box if box is not None else float("inf"),
            betaScale=spec.betaScale,
        )

    raise InvalidParameter(
        f"{kind.value} cannot be dispatched from (H, y) alone",
        summary="use detectSimo with the transmitted symbols and noise",
    )


__all__ = [
    "BACKEND_ALIASES",
    "Backend",
    "DetectorKind",
    "DetectorSpec",
    "DetectResult",
    "Gramian",
    "conjugateGradient",
    "detectAdmin",
    "detectCg",
    "detectGs",
    "detectLinear",
    "detectNsa",
    "detectSimo",
    "gramian",
    "matchedFilter",
    "neumannInverse",
    "runDetector",
    "simoBound",
    "solveGramian",
]
