"""Symplectic form, symplectic spectrum and Williamson normal form.

Coordinates are always ordered ``(x_1..x_n, p_1..p_n)`` so that the standard
form is ``J = [[0, I], [-I, 0]]``.
"""

from __future__ import annotations

import numpy as np

from . import matcore
from .errors import DegeneracyFailureError, OddDimensionError, PairingFailureError

PAIR_TOL = 1e-8
WILLIAMSON_TOL = 1e-8


def standard_form(n: int) -> np.ndarray:
    """Return the ``2n x 2n`` matrix ``J = [[0, I], [-I, 0]]``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    I = np.eye(n)
    Z = np.zeros((n, n))
    return np.block([[Z, I], [-I, Z]])


def sigma(z, w) -> float:
    """Symplectic product ``Jz . w``."""
    z = np.asarray(z, dtype=float)
    w = np.asarray(w, dtype=float)
    return float(standard_form(_half(z.shape[0])) @ z @ w)


def _half(dim: int) -> int:
    if dim % 2 or dim == 0:
        raise OddDimensionError(f"phase-space dimension must be even, got {dim}")
    return dim // 2


def is_symplectic(S, tol: float = 1e-9) -> bool:
    """True iff ``||S^T J S - J||_inf <= tol``."""
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise OddDimensionError(f"expected a square matrix, got shape {S.shape}")
    J = standard_form(_half(S.shape[0]))
    return bool(np.max(np.abs(S.T @ J @ S - J)) <= tol)


def symplectic_residual(S) -> float:
    S = np.asarray(S, dtype=float)
    J = standard_form(_half(S.shape[0]))
    return float(np.max(np.abs(S.T @ J @ S - J)))


def symplectic_inverse(S) -> np.ndarray:
    """``S^{-1} = -J S^T J`` (exact for symplectic S)."""
    S = np.asarray(S, dtype=float)
    J = standard_form(_half(S.shape[0]))
    return -J @ S.T @ J


def symplectic_spectrum(M, pair_tol: float = PAIR_TOL) -> np.ndarray:
    """Symplectic eigenvalues of a positive-definite ``2n x 2n`` matrix.

    The skew-symmetric matrix ``L = M^{1/2} J M^{1/2}`` has eigenvalues
    ``+-i lambda_j``; the eigenvalues of ``L^T L`` are therefore the
    ``lambda_j^2``, each twice. The doubled values are collapsed pairwise.

    Returns:
        ndarray of the n symplectic eigenvalues, ascending.
    """
    M = matcore.as_symmetric(M)
    n = _half(M.shape[0])
    R = matcore.sqrt_spd(M)
    L = R @ standard_form(n) @ R
    w, _ = matcore.eigh_sym(L.T @ L)
    s = np.sqrt(np.clip(w, 0.0, None))
    lo, hi = s[0::2], s[1::2]
    gap = np.abs(hi - lo)
    if np.any(gap > pair_tol * s[-1]):
        raise PairingFailureError(
            f"eigenvalues of L^T L do not pair: max gap {gap.max():.3e} "
            f"(relative tolerance {pair_tol:g})"
        )
    return 0.5 * (lo + hi)


def _canonical_phase(c: np.ndarray) -> np.ndarray:
    # rotate so the first (near-)largest component is real positive;
    # this makes already-normal inputs come back with S = I
    mags = np.abs(c)
    k = int(np.argmax(mags >= (1.0 - 1e-8) * mags.max()))
    return c * (np.conj(c[k]) / mags[k])


def williamson(M, check: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Symplectic diagonalization ``S^T M S = diag(Lambda, Lambda)``.

    With ``K = M^{-1/2} J M^{-1/2}`` (skew-symmetric), the Hermitian matrix
    ``iK`` has eigenvalues ``+-1/lambda_j``. An eigenvector ``a + ib`` of the
    positive eigenvalue ``1/lambda_j`` yields the orthonormal pair
    ``o_j = sqrt2 a``, ``o_{n+j} = -sqrt2 b`` with ``K o_j = -o_{n+j}/lambda_j``.
    Collecting them in ``O`` gives ``O^T K O = diag(Lambda,Lambda)^{-1/2} J
    diag(Lambda,Lambda)^{-1/2}`` and ``S = M^{-1/2} O diag(Lambda,Lambda)^{1/2}``.
    Working with the Hermitian eigenproblem makes degenerate symplectic
    eigenvalues harmless: any orthonormal eigenbasis of a cluster works.

    Returns:
        (S, lam): symplectic S and the symplectic eigenvalues, ascending.
    """
    M = matcore.as_symmetric(M)
    n = _half(M.shape[0])
    J = standard_form(n)
    w, Q = matcore._spd_eigh(M)
    Minvh = (Q / np.sqrt(w)) @ Q.T
    Minvh = 0.5 * (Minvh + Minvh.T)
    K = Minvh @ J @ Minvh
    mu, U = matcore.eigh_herm(1j * K)
    # positive half, largest mu first so lambda = 1/mu ascends; ties keep order
    top = np.argsort(-mu, kind="stable")[:n]
    mu = mu[top]
    U = U[:, top]
    O = np.empty((2 * n, 2 * n))
    for j in range(n):
        c = _canonical_phase(U[:, j])
        O[:, j] = np.sqrt(2.0) * c.real
        O[:, n + j] = -np.sqrt(2.0) * c.imag
    lam = 1.0 / mu
    d = np.sqrt(np.concatenate([lam, lam]))
    S = Minvh @ O * d
    if check:
        D = np.diag(np.concatenate([lam, lam]))
        scale = np.max(np.abs(M))
        res = np.max(np.abs(S.T @ M @ S - D))
        sres = symplectic_residual(S)
        if res > WILLIAMSON_TOL * scale or sres > WILLIAMSON_TOL:
            raise DegeneracyFailureError(
                f"Williamson postcondition failed: diag residual {res:.3e}, "
                f"symplectic residual {sres:.3e}"
            )
    return S, lam


def spectrum_to_json(values) -> dict:
    values = [float(v) for v in values]
    return {"n": len(values), "values": values}
