import numpy as np

from mimodet import core, decomp, phy
from mimodet.core import OpCount
from mimodet.phy import Constellation
from mimodet.types import CMatrix, CVector
from mimodet.exceptions import InvalidParameter
from .linear import _link, gramian, matchedFilter
from .spec import DetectResult


def _clipBox(v: CVector, box: float) -> CVector:
    # comparisons only, nothing to count
    return np.clip(v.real, -box, box) + 1j * np.clip(v.imag, -box, box)


def detectAdmin(
    H: CMatrix,
    y: CVector,
    sigma2: float,
    t: int,
    beta: float | None = None,
    box: float = np.inf,
    betaScale: float = 1.0,
) -> DetectResult:
    """Box-constrained detection by scaled ADMM.

    H^H H + beta I is factored once with LDL and reused by every x-update:

        x = (H^H H + beta I)^-1 (x_MF + beta (z - lambda))
        z = clip(x + lambda) to [-box, box] on both axes
        lambda = lambda + x - z

    starting from z = lambda = 0, so the first iterate is the MMSE estimate with sigma2
    replaced by beta. beta defaults to betaScale * sigma2.

    Raises:
        InvalidParameter: for t < 1, a non-positive beta or box.
    """
    if t < 1:
        raise InvalidParameter(f"ADMIN needs at least one iteration, got {t}")
    if beta is None:
        beta = betaScale * sigma2
    if not beta > 0:
        raise InvalidParameter(
            f"ADMIN beta must be positive, got {beta}",
            summary="pass beta explicitly when the noise variance is zero",
        )
    if not box > 0:
        raise InvalidParameter(f"ADMIN box bound must be positive, got {box}")

    H, y = _link(H, y)
    mfOps, ops = OpCount(), OpCount()
    mf = matchedFilter(H, y, mfOps)

    factors = decomp.ldl(gramian(H, beta, ops).G, ops)
    U = factors.size

    z = np.zeros(U, dtype=np.complex128)
    lam = np.zeros(U, dtype=np.complex128)
    iterates: list[CVector] = []
    residualNorms: list[float] = []

    for _ in range(t):
        shift = core.rcmulVec(beta, core.csubVec(z, lam, ops), ops)
        x = decomp.ldlSolve(factors, core.caddVec(mf, shift, ops), ops)

        v = core.caddVec(x, lam, ops)
        z = _clipBox(v, box)
        lam = core.csubVec(v, z, ops)

        iterates.append(x)
        residualNorms.append(float(np.linalg.norm(x - z)))

    return DetectResult(
        xSoft=core.checked(x, "detectAdmin"),
        ops=ops,
        mfOps=mfOps,
        iterates=iterates,
        residualNorms=residualNorms,
        projected=z,
    )


def detectSimo(H: CMatrix, x: CVector, n: CVector) -> DetectResult:
    """Interference-free estimates: user u alone on its own column, same noise.

    y_u = h_u x_u + n and x_u ~ h_u^H y_u / ||h_u||^2 (maximum ratio combining).
    """
    H = core.asCMatrix(H)
    x = core.asCVector(x)
    n = core.asCVector(n)
    N, U = H.shape
    ops = OpCount()

    estimates = np.empty(U, dtype=np.complex128)
    for u in range(U):
        h = H[:, u]
        yu = core.caddVec(core.cmulVec(h, x[u], ops), n, ops)
        energy = core.normSq(h, ops)
        estimates[u] = core.rcmul(core.reciprocal(energy, ops), core.dotH(h, yu, ops), ops)

    return DetectResult(xSoft=core.checked(estimates, "detectSimo"), ops=ops)


def simoBound(
    N: int,
    constellation: Constellation,
    snrDb: float,
    trials: int,
    seed: int,
    users: int = 1,
) -> float:
    """Single-user matched filter bit error rate over `trials` Rayleigh draws.

    With `users` > 1 every trial carries that many independent single-user links sharing
    one noise draw, and the noise variance follows the `users`-user snr convention, so the
    bound lines up with a sweep of the same size.
    """
    if N < 1 or users < 1:
        raise InvalidParameter(f"simoBound needs N >= 1 and users >= 1, got {N}, {users}")
    if trials < 1:
        raise InvalidParameter(f"simoBound needs at least one trial, got {trials}")

    sigma2 = phy.sigma2FromSnr(snrDb, users)
    errors = 0
    total = 0

    for index in range(trials):
        bits, x, H, n = phy.drawLink(
            N, users, constellation, sigma2, phy.trialRng(seed, index)
        )
        decided, _ = phy.slice(detectSimo(H, x, n).xSoft, constellation)
        errors += int(np.count_nonzero(decided != bits))
        total += bits.size

    return errors / total
