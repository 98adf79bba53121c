"""Instrumented matrix decompositions and triangular solvers.

Gram-Schmidt QR, Cholesky and LDL all work on the U x U regularized Gramian. Each
factorization charges its accumulator exactly what the scalar algorithm executes, so the
measured real multiplication counts can be compared with the closed forms in
`mimodet.complexity`:

- Gram-Schmidt: U^2 (4U + 2), U square roots, U reciprocals
- Cholesky: (2U^3 + 3U^2 - 5U) / 3, U square roots, U reciprocals
- LDL: (2U^3 + 12U^2 - 14U) / 3, no square roots, U reciprocals
"""
import dataclasses

import numpy as np

from . import core
from .core import OpCount
from .types import CMatrix, CVector, RVector
from .constants import PIVOT_TOLERANCE, HERMITIAN_TOLERANCE
from .exceptions import (
    DimensionMismatch,
    NearSingular,
    NotHermitian,
    NotPositiveDefinite,
    Singular,
    SingularTriangular,
)


@dataclasses.dataclass(frozen=True)
class QrFactors:
    Q: CMatrix  # unitary
    R: CMatrix  # upper triangular, real positive diagonal


@dataclasses.dataclass(frozen=True)
class CholFactor:
    L: CMatrix  # lower triangular, real positive diagonal


@dataclasses.dataclass(frozen=True)
class LdlFactors:
    L: CMatrix  # unit lower triangular
    D: CVector  # real positive pivots held in complex storage
    dInv: RVector  # reciprocals of D, computed once during factorization

    @property
    def size(self) -> int:
        return self.L.shape[0]


def _square(A: CMatrix, what: str) -> CMatrix:
    M = core.asCMatrix(A)
    if M.shape[0] != M.shape[1]:
        raise DimensionMismatch(f"{what} expects a square matrix, got {M.shape}")
    return M


def _scale(A: CMatrix) -> float:
    return float(np.max(np.abs(A))) if A.size else 0.0


def _requireHermitian(A: CMatrix, what: str) -> None:
    deviation = float(np.max(np.abs(A - core.hermitian(A))))
    if deviation > HERMITIAN_TOLERANCE * max(_scale(A), 1e-300):
        raise NotHermitian(
            f"{what} input deviates from its conjugate transpose by {deviation:.3e}",
            summary="symmetrize the gramian (G + G^H) / 2 before factorizing",
        )


def gramSchmidtQr(A: CMatrix, acc: OpCount) -> QrFactors:
    """Classical Gram-Schmidt QR of a square matrix.

    Column i is normalized with r_ii = ||q_i|| (square root of the squared norm, then one
    reciprocal and a real x complex scaling), and every later column j is orthogonalized
    against it with r_ij = q_i^H q_j and q_j -= r_ij q_i.

    Raises:
        NearSingular: if a column norm collapses below 1e-12 times the input scale.
    """
    A = _square(A, "gramSchmidtQr")
    U = A.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(A)

    Q = A.copy()
    R = np.zeros((U, U), dtype=np.complex128)

    for i in range(U):
        qi = Q[:, i]
        rii = core.rsqrt(core.normSq(qi, acc), acc)
        if rii <= tolerance:
            raise NearSingular(
                f"column {i} vanished during orthogonalization (norm {rii:.3e})",
                summary="the input columns are linearly dependent",
            )

        inv = core.reciprocal(rii, acc)
        Q[:, i] = core.rcmulVec(inv, qi, acc)
        R[i, i] = rii

        rest = U - i - 1
        if rest:
            # r_ij for every j > i, then the rank-one update of the trailing columns
            rij = np.conj(Q[:, i]) @ Q[:, i + 1 :]
            acc.countComplexMul(U * rest)
            acc.countComplexAdd((U - 1) * rest)

            update = np.outer(Q[:, i], rij)
            acc.countComplexMul(U * rest)
            Q[:, i + 1 :] = core.csubVec(Q[:, i + 1 :], update, acc)
            R[i, i + 1 :] = rij

    return QrFactors(Q=Q, R=R)


def cholesky(A: CMatrix, acc: OpCount) -> CholFactor:
    """Cholesky factor L with A = L L^H.

    Diagonal: L_ii = sqrt(A_ii - sum_{j<i} |L_ij|^2).
    Below the diagonal: L_ki = (A_ki - sum_{j<i} L_kj conj(L_ij)) / L_ii, applied as one
    reciprocal per column and a real x complex product per entry.

    Raises:
        NotHermitian: if A is not Hermitian within 1e-12 relative.
        NotPositiveDefinite: on a pivot at or below 1e-12 times the input scale.
    """
    A = _square(A, "cholesky")
    _requireHermitian(A, "cholesky")
    U = A.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(A)

    L = np.zeros((U, U), dtype=np.complex128)

    for i in range(U):
        pivot = A[i, i].real
        if i:
            pivot -= core.normSq(L[i, :i], acc)
            acc.sub += 1

        if pivot <= tolerance:
            raise NotPositiveDefinite(
                f"pivot {i} is {pivot:.3e}",
                summary="the matrix is not positive definite; regularize the gramian",
            )

        lii = core.rsqrt(pivot, acc)
        L[i, i] = lii
        inv = core.reciprocal(lii, acc)

        rest = U - i - 1
        if rest:
            column = A[i + 1 :, i]
            if i:
                column = core.csubVec(
                    column, core.matmul(L[i + 1 :, :i], np.conj(L[i, :i]), acc), acc
                )
            L[i + 1 :, i] = core.rcmulVec(inv, column, acc)

    return CholFactor(L=L)


def ldl(A: CMatrix, acc: OpCount) -> LdlFactors:
    """Square-root free factorization A = L diag(D) L^H with unit lower triangular L.

    D is kept in complex storage, so the scaling by 1/D_i and the weighted rows
    W_kj = L_kj D_j go through the complex multiplier. Relative to Cholesky this adds
    3U(U-1) real multiplications and removes the U square roots.

    Raises:
        NotHermitian: if A is not Hermitian within 1e-12 relative.
        NotPositiveDefinite: on a pivot at or below 1e-12 times the input scale.
    """
    A = _square(A, "ldl")
    _requireHermitian(A, "ldl")
    U = A.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(A)

    L = np.eye(U, dtype=np.complex128)
    D = np.zeros(U, dtype=np.complex128)
    dInv = np.zeros(U, dtype=np.float64)
    W = np.zeros((U, U), dtype=np.complex128)  # W[k, j] = L[k, j] * D[j]

    for i in range(U):
        pivot = A[i, i].real
        if i:
            weighted = core.cmulVec(W[i, :i], np.conj(L[i, :i]), acc)
            pivot -= float(np.sum(weighted).real)
            acc.add += i - 1
            acc.sub += 1

        if pivot <= tolerance:
            raise NotPositiveDefinite(
                f"pivot {i} is {pivot:.3e}",
                summary="the matrix is not positive definite; regularize the gramian",
            )

        D[i] = complex(pivot, 0.0)
        inv = core.reciprocal(D[i], acc)
        dInv[i] = inv.real

        rest = U - i - 1
        if rest:
            column = A[i + 1 :, i]
            if i:
                column = core.csubVec(
                    column, core.matmul(L[i + 1 :, :i], np.conj(W[i, :i]), acc), acc
                )
            L[i + 1 :, i] = core.cmulVec(column, inv, acc)
            W[i + 1 :, i] = core.cmulVec(L[i + 1 :, i], D[i], acc)

    return LdlFactors(L=L, D=D, dInv=dInv)


def _triangularChecks(T: CMatrix, b: CVector, what: str) -> tuple[CMatrix, CVector]:
    T = _square(T, what)
    b = core.asCVector(b)
    if b.size != T.shape[0]:
        raise DimensionMismatch(f"{what}: rhs length {b.size} for a {T.shape} system")
    return T, b


def _divideByDiagonal(
    s: complex, d: complex, tolerance: float, index: int, acc: OpCount
) -> complex:
    if abs(d) <= tolerance:
        raise SingularTriangular(f"diagonal entry {index} is {abs(d):.3e}")
    inv = core.reciprocal(d, acc)
    if d.imag == 0.0:
        return core.rcmul(inv.real, s, acc)
    return core.cmul(inv, s, acc)


def forwardSub(
    L: CMatrix, b: CVector, acc: OpCount, unitDiagonal: bool = False
) -> CVector:
    """Solves L z = b for lower triangular L.

    With `unitDiagonal` the diagonal is taken as ones and never read.
    """
    L, b = _triangularChecks(L, b, "forwardSub")
    U = L.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(L)
    z = np.zeros(U, dtype=np.complex128)

    for i in range(U):
        s = complex(b[i])
        if i:
            s -= core.dot(L[i, :i], z[:i], acc)
            acc.countComplexSub()
        z[i] = s if unitDiagonal else _divideByDiagonal(s, L[i, i], tolerance, i, acc)

    return z


def backwardSub(
    Uc: CMatrix, b: CVector, acc: OpCount, unitDiagonal: bool = False
) -> CVector:
    """Solves Uc x = b for upper triangular Uc (used with R and with L^H)."""
    Uc, b = _triangularChecks(Uc, b, "backwardSub")
    U = Uc.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(Uc)
    x = np.zeros(U, dtype=np.complex128)

    for i in range(U - 1, -1, -1):
        s = complex(b[i])
        if i < U - 1:
            s -= core.dot(Uc[i, i + 1 :], x[i + 1 :], acc)
            acc.countComplexSub()
        x[i] = s if unitDiagonal else _divideByDiagonal(s, Uc[i, i], tolerance, i, acc)

    return x


def invertDirect(A: CMatrix) -> CMatrix:
    """Gauss-Jordan inverse with partial pivoting. Test oracle only, never counted.

    Raises:
        Singular: if a pivot underflows 1e-12 times the input scale.
    """
    A = _square(A, "invertDirect")
    n = A.shape[0]
    tolerance = PIVOT_TOLERANCE * _scale(A)
    aug = np.hstack([A.copy(), np.eye(n, dtype=np.complex128)])

    for col in range(n):
        pivotRow = col + int(np.argmax(np.abs(aug[col:, col])))
        if abs(aug[pivotRow, col]) <= tolerance:
            raise Singular(f"pivot {col} underflowed during gauss-jordan elimination")

        if pivotRow != col:
            aug[[col, pivotRow]] = aug[[pivotRow, col]]

        aug[col] = aug[col] / aug[col, col]
        factors = aug[:, col].copy()
        factors[col] = 0.0
        aug -= np.outer(factors, aug[col])

    return aug[:, n:]


# solve pipelines of the exact-inversion detectors


def qrSolve(factors: QrFactors, b: CVector, acc: OpCount) -> CVector:
    """x = R^-1 Q^H b"""
    return backwardSub(factors.R, core.matmul(core.hermitian(factors.Q), b, acc), acc)


def choleskySolve(factor: CholFactor, b: CVector, acc: OpCount) -> CVector:
    """L z = b by forward substitution, then L^H x = z by backward substitution."""
    z = forwardSub(factor.L, b, acc)
    return backwardSub(core.hermitian(factor.L), z, acc)


def ldlSolve(factors: LdlFactors, b: CVector, acc: OpCount) -> CVector:
    """L z = b, then L^H x = D^-1 z.

    The reciprocals of D come from the factorization; applying them to the complex z
    costs 2U real multiplications.
    """
    z = forwardSub(factors.L, b, acc, unitDiagonal=True)
    scaled = core.rcmulVec(factors.dInv, z, acc)
    return backwardSub(core.hermitian(factors.L), scaled, acc, unitDiagonal=True)
