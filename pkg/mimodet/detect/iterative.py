"""Approximate inversion-based detectors.

All three work on G = H^H H + sigma2 I and the matched filter output x_MF:

- NSA truncates the Neumann series of G^-1 around its diagonal X
- GS runs Gauss-Seidel sweeps, (D + L) applied by forward substitution
- CG runs conjugate gradient from x = 0
"""
import typing
import warnings

import numpy as np

from mimodet import core
from mimodet.core import OpCount
from mimodet.types import CMatrix, CVector, RVector
from mimodet.constants import PIVOT_TOLERANCE
from mimodet.exceptions import Breakdown, DivergenceWarning, InvalidParameter, SingularTriangular
from .linear import _link, gramian, matchedFilter
from .spec import DetectResult


def _requireIterations(t: int) -> None:
    if t < 1:
        raise InvalidParameter(f"iteration count must be at least 1, got {t}")


def _diagonalInverse(G: CMatrix, acc: OpCount) -> RVector:
    d = np.real(np.diagonal(G)).copy()
    tolerance = PIVOT_TOLERANCE * float(np.max(np.abs(G)))
    small = np.flatnonzero(np.abs(d) <= tolerance)
    if small.size:
        raise SingularTriangular(
            f"diagonal entry {int(small[0])} of the gramian is {d[small[0]]:.3e}",
            summary="a user column of H is (numerically) zero",
        )
    acc.countReciprocal(d.size)
    return 1.0 / d


def neumannInverse(G: CMatrix, t: int, acc: OpCount) -> CMatrix:
    """Explicit sum_{k<t} (-X^-1 E)^k X^-1 with X = diag(G), E = G - X.

    This is the matrix form; each extra term costs a full U x U product.
    """
    _requireIterations(t)
    G = core.asCMatrix(G)
    U = G.shape[0]
    dInv = _diagonalInverse(G, acc)

    E = G - np.diag(np.diagonal(G))
    P = -(dInv[:, None] * E)
    acc.countRealComplexMul(U * (U - 1))

    S = np.eye(U, dtype=np.complex128)
    for _ in range(t - 1):
        S = core.matmul(P, S, acc)
        S[np.diag_indices(U)] += 1.0
        acc.add += U

    result = S * dInv[None, :]
    acc.countRealComplexMul(U * U)
    return core.checked(result, "neumannInverse")


def detectNsa(
    H: CMatrix, y: CVector, sigma2: float, t: int
) -> DetectResult:
    """Neumann series detector applied term by term to x_MF.

    term_0 = X^-1 x_MF and term_k = -X^-1 E term_{k-1}; the estimate is the sum of the
    first t terms. `diverged` is set when the last term is larger than the one before it,
    the observable sign that the spectral radius of X^-1 E exceeds one.
    """
    _requireIterations(t)
    H, y = _link(H, y)
    mfOps, ops = OpCount(), OpCount()
    mf = matchedFilter(H, y, mfOps)

    G = gramian(H, sigma2, ops).G
    U = G.shape[0]
    dInv = _diagonalInverse(G, ops)
    E = G - np.diag(np.diagonal(G))

    term = core.rcmulVec(dInv, mf, ops)
    estimate = term.copy()
    iterates = [estimate.copy()]
    termNorms = [float(np.linalg.norm(term))]

    for _ in range(t - 1):
        # E has a zero diagonal, so E term costs U(U - 1) products
        product = E @ term
        ops.countComplexMul(U * (U - 1))
        ops.countComplexAdd(U * max(U - 2, 0))
        term = -core.rcmulVec(dInv, product, ops)
        estimate = core.caddVec(estimate, term, ops)
        iterates.append(estimate.copy())
        termNorms.append(float(np.linalg.norm(term)))

    diverged = len(termNorms) > 1 and termNorms[-1] > termNorms[-2]
    if diverged:
        warnings.warn(
            f"NSA series grew from {termNorms[-2]:.3g} to {termNorms[-1]:.3g} at t={t}",
            DivergenceWarning,
        )

    return DetectResult(
        xSoft=core.checked(estimate, "detectNsa"),
        ops=ops,
        mfOps=mfOps,
        iterates=iterates,
        residualNorms=termNorms,
        diverged=diverged,
    )


def detectGs(
    H: CMatrix,
    y: CVector,
    sigma2: float,
    t: int,
    init: typing.Literal["zero", "diagonal"] = "zero",
) -> DetectResult:
    """t Gauss-Seidel sweeps on G x = x_MF.

    A sweep updates x_i = (x_MF_i - sum_{j<i} G_ij x_j - sum_{j>i} G_ij x_j) / G_ii in
    place, which is (D + L)^-1 (x_MF - R x) evaluated by forward substitution.

    Raises:
        SingularTriangular: if a diagonal entry of G underflows.
    """
    _requireIterations(t)
    H, y = _link(H, y)
    mfOps, ops = OpCount(), OpCount()
    mf = matchedFilter(H, y, mfOps)

    G = gramian(H, sigma2, ops).G
    U = G.shape[0]
    dInv = _diagonalInverse(G, ops)

    if init == "diagonal":
        x = core.rcmulVec(dInv, mf, ops)
    elif init == "zero":
        x = np.zeros(U, dtype=np.complex128)
    else:
        raise InvalidParameter(f"unknown GS initialization '{init}'")

    iterates: list[CVector] = []
    for _ in range(t):
        for i in range(U):
            s = complex(mf[i])
            if i:
                s -= core.dot(G[i, :i], x[:i], ops)
                ops.countComplexSub()
            if i < U - 1:
                s -= core.dot(G[i, i + 1 :], x[i + 1 :], ops)
                ops.countComplexSub()
            x[i] = core.rcmul(float(dInv[i]), s, ops)
        iterates.append(x.copy())

    return DetectResult(xSoft=x, ops=ops, mfOps=mfOps, iterates=iterates)


def conjugateGradient(
    G: CMatrix, b: CVector, t: int, acc: OpCount
) -> tuple[CVector, list[CVector], list[float]]:
    """At most t conjugate gradient iterations on G x = b from x = 0.

    Stops early once the residual vanishes to machine precision; the remaining
    iterations would divide by a zero curvature.

    Returns:
        (x, iterates, residualNorms) with the initial residual norm first.

    Raises:
        Breakdown: if p^H G p <= 0, i.e. G is not positive definite.
    """
    _requireIterations(t)
    x = np.zeros(G.shape[0], dtype=np.complex128)
    r = np.asarray(b, dtype=np.complex128).copy()
    p = r.copy()
    rr = core.normSq(r, acc)
    converged = np.finfo(np.float64).eps ** 2 * rr

    iterates: list[CVector] = []
    residualNorms = [float(np.sqrt(rr))]

    for it in range(t):
        if rr <= converged:
            break

        Gp = core.matmul(G, p, acc)
        curvature = core.dotH(p, Gp, acc).real
        if curvature <= 0:
            raise Breakdown(
                f"curvature p^H G p = {curvature:.3e} at iteration {it}",
                summary="conjugate gradient needs a positive definite gramian",
            )

        alpha = rr * core.reciprocal(curvature, acc)
        acc.countRealMul()
        x = core.caddVec(x, core.rcmulVec(alpha, p, acc), acc)
        r = core.csubVec(r, core.rcmulVec(alpha, Gp, acc), acc)

        rrNext = core.normSq(r, acc)
        beta = rrNext * core.reciprocal(rr, acc)
        acc.countRealMul()
        p = core.caddVec(r, core.rcmulVec(beta, p, acc), acc)
        rr = rrNext

        iterates.append(x.copy())
        residualNorms.append(float(np.sqrt(rr)))

    return x, iterates, residualNorms


def detectCg(H: CMatrix, y: CVector, sigma2: float, t: int) -> DetectResult:
    """Conjugate gradient on G x = x_MF, at most t iterations from x = 0."""
    _requireIterations(t)
    H, y = _link(H, y)
    mfOps, ops = OpCount(), OpCount()
    mf = matchedFilter(H, y, mfOps)

    G = gramian(H, sigma2, ops).G
    x, iterates, residualNorms = conjugateGradient(G, mf, t, ops)

    return DetectResult(
        xSoft=core.checked(x, "detectCg"),
        ops=ops,
        mfOps=mfOps,
        iterates=iterates,
        residualNorms=residualNorms,
    )
