import typing
import dataclasses

import numpy as np

from mimodet import core, decomp
from mimodet.core import OpCount
from mimodet.types import CMatrix, CVector
from mimodet.exceptions import DimensionMismatch, InvalidParameter
from .spec import Backend, DetectorKind, DetectorSpec, DetectResult


@dataclasses.dataclass(frozen=True)
class Gramian:
    G: CMatrix  # Hermitian U x U
    regularization: float  # sigma2 or beta, already on the diagonal

    @property
    def size(self) -> int:
        return self.G.shape[0]


def _link(H: typing.Any, y: typing.Any) -> tuple[CMatrix, CVector]:
    H = core.asCMatrix(H)
    y = core.asCVector(y)
    if H.shape[0] != y.size:
        raise DimensionMismatch(
            f"channel has {H.shape[0]} rows but y has {y.size} entries",
            summary="y must have one entry per base-station antenna",
        )
    return H, y


def matchedFilter(H: CMatrix, y: CVector, acc: OpCount) -> CVector:
    """x_MF = H^H y (N U complex multiplications)."""
    H, y = _link(H, y)
    return core.matmul(core.hermitian(H), y, acc)


def gramian(H: CMatrix, reg: float, acc: OpCount) -> Gramian:
    """G = H^H H + reg I.

    Only the upper triangle is computed (U(U+1)/2 inner products of length N), the lower
    one is mirrored and the diagonal is forced real, so G is Hermitian to the last bit.
    """
    H = core.asCMatrix(H)
    if reg < 0:
        raise InvalidParameter(f"gramian regularization must be non-negative, got {reg}")
    N, U = H.shape

    products = U * (U + 1) // 2
    acc.countComplexMul(N * products)
    acc.countComplexAdd((N - 1) * products)

    full = core.hermitian(H) @ H
    upper = np.triu(full, 1)
    G = upper + core.hermitian(upper)
    diagonal = np.einsum("ij,ij->j", H.conj(), H).real
    if reg:
        acc.add += U
        diagonal = diagonal + reg
    np.fill_diagonal(G, diagonal)

    return Gramian(G=core.checked(G, "gramian"), regularization=float(reg))


def solveGramian(
    gram: Gramian, mf: CVector, backend: Backend, acc: OpCount
) -> CVector:
    """G^-1 x_MF through one of the exact-inversion backends."""
    if backend == Backend.QR:
        return decomp.qrSolve(decomp.gramSchmidtQr(gram.G, acc), mf, acc)
    if backend == Backend.CHOLESKY:
        return decomp.choleskySolve(decomp.cholesky(gram.G, acc), mf, acc)
    if backend == Backend.LDL:
        return decomp.ldlSolve(decomp.ldl(gram.G, acc), mf, acc)
    # oracle path, uncounted
    return decomp.invertDirect(gram.G) @ mf


def detectLinear(
    H: CMatrix, y: CVector, sigma2: float, spec: DetectorSpec
) -> DetectResult:
    """ZF (unregularized) or MMSE (sigma2 on the diagonal) equalization.

    Raises:
        NearSingular: from the decomposition, e.g. ZF with more users than antennas.
    """
    if spec.kind not in DetectorKind.exact():
        raise InvalidParameter(f"detectLinear cannot run a {spec.kind.value} detector")
    if sigma2 < 0:
        raise InvalidParameter(f"noise variance must be non-negative, got {sigma2}")

    H, y = _link(H, y)
    mfOps, ops = OpCount(), OpCount()
    mf = matchedFilter(H, y, mfOps)

    reg = sigma2 if spec.kind == DetectorKind.MMSE else 0.0
    gram = gramian(H, reg, ops)
    xSoft = solveGramian(gram, mf, spec.backend, ops)

    return DetectResult(xSoft=xSoft, ops=ops, mfOps=mfOps)
