"""Complex arithmetic with explicit operation counting.

Every counted primitive takes an `OpCount` accumulator and tallies what a hardware
datapath would execute under the active `CountingConvention`:

- complex x complex: 4 real multiplications, 1 addition, 1 subtraction
- real x complex: 2 real multiplications
- real x real: 1 real multiplication
- conjugation and negation are free
- a squared magnitude |a|^2 is charged as one complex multiplication

Kernels vectorize with numpy; the tallies are those of the element-by-element algorithm.
"""
import math
import typing
import dataclasses

import numpy as np

from .config import settings
from .types import CMatrix, CVector
from .exceptions import DimensionMismatch, NumericalOverflow


@dataclasses.dataclass(frozen=True)
class CountingConvention:
    complexMul: int = 4
    realComplexMul: int = 2
    realMul: int = 1


STANDARD_CONVENTION = CountingConvention()


@dataclasses.dataclass
class OpCount:
    """Tally of the operations executed by one algorithm invocation.

    Accumulators are single-owner: create one per computation and pass it down.
    """

    sqrt: int = 0
    reciprocal: int = 0
    realMul: int = 0
    add: int = 0
    sub: int = 0
    convention: CountingConvention = dataclasses.field(
        default=STANDARD_CONVENTION, compare=False, repr=False
    )

    def countComplexMul(self, n: int = 1) -> None:
        self.realMul += self.convention.complexMul * n
        self.add += n
        self.sub += n

    def countRealComplexMul(self, n: int = 1) -> None:
        self.realMul += self.convention.realComplexMul * n

    def countRealMul(self, n: int = 1) -> None:
        self.realMul += self.convention.realMul * n

    def countComplexAdd(self, n: int = 1) -> None:
        self.add += 2 * n

    def countComplexSub(self, n: int = 1) -> None:
        self.sub += 2 * n

    def countSqrt(self, n: int = 1) -> None:
        self.sqrt += n

    def countReciprocal(self, n: int = 1) -> None:
        self.reciprocal += n

    def copy(self) -> "OpCount":
        return dataclasses.replace(self)

    def __add__(self, other: "OpCount") -> "OpCount":
        return OpCount(
            sqrt=self.sqrt + other.sqrt,
            reciprocal=self.reciprocal + other.reciprocal,
            realMul=self.realMul + other.realMul,
            add=self.add + other.add,
            sub=self.sub + other.sub,
            convention=self.convention,
        )

    def __iadd__(self, other: "OpCount") -> "OpCount":
        self.sqrt += other.sqrt
        self.reciprocal += other.reciprocal
        self.realMul += other.realMul
        self.add += other.add
        self.sub += other.sub
        return self

    def toJson(self) -> dict[str, int]:
        return {
            "sqrt": self.sqrt,
            "reciprocal": self.reciprocal,
            "real_mul": self.realMul,
            "add": self.add,
            "sub": self.sub,
        }


def checked(value: typing.Any, where: str) -> typing.Any:
    if settings.checkFinite and not np.all(np.isfinite(value)):
        raise NumericalOverflow(
            f"non-finite result in {where}",
            summary="an intermediate value overflowed or became NaN; check the input scaling",
        )
    return value


def cmul(a: complex, b: complex, acc: OpCount) -> complex:
    """Complex product a*b, schoolbook form (4 real mul, 1 add, 1 sub)."""
    re = a.real * b.real - a.imag * b.imag
    im = a.real * b.imag + a.imag * b.real
    acc.countComplexMul()
    return checked(complex(re, im), "cmul")


def rcmul(r: float, b: complex, acc: OpCount) -> complex:
    acc.countRealComplexMul()
    return checked(complex(r * b.real, r * b.imag), "rcmul")


def dotH(a: CVector, b: CVector, acc: OpCount) -> complex:
    """Returns sum(conj(a_k) * b_k)."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"dotH length mismatch: {a.shape} vs {b.shape}")
    n = a.size
    acc.countComplexMul(n)
    acc.countComplexAdd(max(n - 1, 0))
    return checked(complex(np.vdot(a, b)), "dotH")


def dot(a: CVector, b: CVector, acc: OpCount) -> complex:
    """Unconjugated sum(a_k * b_k), the row-times-column step of triangular solves."""
    if a.shape != b.shape:
        raise DimensionMismatch(f"dot length mismatch: {a.shape} vs {b.shape}")
    n = a.size
    acc.countComplexMul(n)
    acc.countComplexAdd(max(n - 1, 0))
    return checked(complex(np.dot(a, b)), "dot")


def normSq(a: CVector, acc: OpCount) -> float:
    """Squared euclidean norm, charged as one complex multiplication per element."""
    n = a.size
    acc.countComplexMul(n)
    acc.add += max(n - 1, 0)
    return checked(float(np.sum(a.real * a.real + a.imag * a.imag)), "normSq")


def matmul(A: CMatrix, B: CMatrix, acc: OpCount) -> CMatrix:
    """Dense product AB. Vectors on the right are treated as single columns."""
    if A.ndim != 2 or A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"matmul shapes {A.shape} and {B.shape} do not agree")
    rows, inner = A.shape
    cols = 1 if B.ndim == 1 else B.shape[1]
    acc.countComplexMul(rows * inner * cols)
    acc.countComplexAdd(rows * max(inner - 1, 0) * cols)
    return checked(A @ B, "matmul")


def hermitian(A: CMatrix) -> CMatrix:
    """Conjugate transpose; free under the counting convention."""
    return np.conj(A.T)


# vector kernels used by the factorizations and detectors


def cmulVec(a: CVector, b: CVector | complex, acc: OpCount) -> CVector:
    acc.countComplexMul(a.size)
    return checked(a * b, "cmulVec")


def rcmulVec(r: typing.Any, v: CVector, acc: OpCount) -> CVector:
    """Real scalar (or elementwise real vector) times a complex vector."""
    acc.countRealComplexMul(v.size)
    return checked(np.asarray(r, dtype=np.float64) * v, "rcmulVec")


def csubVec(a: CVector, b: CVector, acc: OpCount) -> CVector:
    acc.countComplexSub(np.size(a))
    return a - b


def caddVec(a: CVector, b: CVector, acc: OpCount) -> CVector:
    acc.countComplexAdd(np.size(a))
    return a + b


def rsqrt(x: float, acc: OpCount) -> float:
    acc.countSqrt()
    return math.sqrt(x)


def reciprocal(x: typing.Any, acc: OpCount) -> typing.Any:
    """1/x for a real or complex-stored scalar."""
    acc.countReciprocal()
    return checked(1.0 / x, "reciprocal")


def asCMatrix(A: typing.Any) -> CMatrix:
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got shape {M.shape}")
    return M


def asCVector(v: typing.Any) -> CVector:
    x = np.asarray(v, dtype=np.complex128)
    if x.ndim != 1 or x.size < 1:
        raise DimensionMismatch(f"expected a non-empty vector, got shape {x.shape}")
    return x
