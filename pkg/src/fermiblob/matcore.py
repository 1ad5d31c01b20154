"""Small dense symmetric linear algebra.

Every matrix handled by the package is tiny (at most a few dozen rows), so
eigenproblems are solved with cyclic Jacobi rotations: simple, accurate to
machine precision, and orthogonality-preserving by construction.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import InputError, NoConvergenceError, NonSymmetricError, NotPositiveDefiniteError

SYM_TOL = 1e-10
POS_TOL = 1e-12
MAX_SWEEPS = 60


def as_symmetric(A, tol: float = SYM_TOL) -> np.ndarray:
    """Validate that ``A`` is square and symmetric, and return ``(A + A.T)/2``.

    The symmetry test is relative: ``|A_ij - A_ji| <= tol * max|A|``.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InputError(f"expected a non-empty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InputError("matrix has non-finite entries")
    scale = np.max(np.abs(A))
    if np.max(np.abs(A - A.T)) > tol * scale:
        raise NonSymmetricError(
            f"asymmetry {np.max(np.abs(A - A.T)):.3e} exceeds {tol:g} * {scale:.3e}"
        )
    return 0.5 * (A + A.T)


def _jacobi(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic Jacobi on a real symmetric or complex Hermitian matrix.

    Works in place on a copy. Returns (unsorted eigenvalues, eigenvectors).
    """
    A = A.copy()
    d = A.shape[0]
    cplx = np.iscomplexobj(A)
    V = np.eye(d, dtype=A.dtype)
    if d == 1:
        return A.real.diagonal().copy(), V
    for _ in range(MAX_SWEEPS):
        rotated = False
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = A[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                app = A[p, p].real
                aqq = A[q, q].real
                # Rutishauser's test: the entry no longer affects either diagonal
                if abs(app) + 100.0 * mag == abs(app) and abs(aqq) + 100.0 * mag == abs(aqq):
                    A[p, q] = A[q, p] = 0.0
                    continue
                rotated = True
                if cplx:
                    # make the pivot real and positive with a diagonal phase on column q
                    ph = apq / mag
                    A[:, q] *= np.conj(ph)
                    A[q, :] *= ph
                    V[:, q] *= np.conj(ph)
                    apq = mag
                else:
                    apq = apq.real
                theta = (aqq - app) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                colp = A[:, p].copy()
                colq = A[:, q].copy()
                A[:, p] = c * colp - s * colq
                A[:, q] = s * colp + c * colq
                rowp = A[p, :].copy()
                rowq = A[q, :].copy()
                A[p, :] = c * rowp - s * rowq
                A[q, :] = s * rowp + c * rowq
                A[p, p] = app - t * apq
                A[q, q] = aqq + t * apq
                A[p, q] = A[q, p] = 0.0
                vp = V[:, p].copy()
                vq = V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
        if not rotated:
            return A.real.diagonal().copy(), V
    raise NoConvergenceError(f"Jacobi iteration did not converge in {MAX_SWEEPS} sweeps")


def eigh_sym(A) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a real symmetric matrix.

    Returns:
        (w, Q): eigenvalues in ascending order and an orthogonal matrix whose
        columns are the matching eigenvectors, so ``A = Q diag(w) Q.T``.
    """
    A = as_symmetric(A)
    w, Q = _jacobi(A)
    order = np.argsort(w, kind="stable")
    return w[order], Q[:, order]


def eigh_herm(H) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decomposition of a complex Hermitian matrix (ascending eigenvalues)."""
    H = np.array(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise InputError(f"expected a square matrix, got shape {H.shape}")
    scale = np.max(np.abs(H))
    if np.max(np.abs(H - H.conj().T)) > SYM_TOL * scale:
        raise NonSymmetricError("matrix is not Hermitian")
    w, U = _jacobi(0.5 * (H + H.conj().T))
    order = np.argsort(w, kind="stable")
    return w[order], U[:, order]


def _spd_eigh(A) -> tuple[np.ndarray, np.ndarray]:
    A = as_symmetric(A)
    w, Q = eigh_sym(A)
    if w[0] <= POS_TOL * np.max(np.abs(A)):
        raise NotPositiveDefiniteError(f"smallest eigenvalue {w[0]:.3e} is not positive")
    return w, Q


def sqrt_spd(A) -> np.ndarray:
    """Symmetric positive-definite square root."""
    w, Q = _spd_eigh(A)
    B = (Q * np.sqrt(w)) @ Q.T
    return 0.5 * (B + B.T)


def inv_spd(A) -> np.ndarray:
    w, Q = _spd_eigh(A)
    B = (Q / w) @ Q.T
    return 0.5 * (B + B.T)


def invsqrt_spd(A) -> np.ndarray:
    """``A^{-1/2}`` for symmetric positive-definite ``A``."""
    w, Q = _spd_eigh(A)
    B = (Q / np.sqrt(w)) @ Q.T
    return 0.5 * (B + B.T)


def is_positive_definite(A) -> bool:
    try:
        _spd_eigh(A)
    except NotPositiveDefiniteError:
        return False
    return True


def det(A) -> float:
    return float(np.linalg.det(np.asarray(A, dtype=float)))


def matrix_to_json(A) -> dict:
    A = np.asarray(A, dtype=float)
    return {"dim": int(A.shape[0]), "entries": A.tolist()}


def matrix_from_json(obj) -> np.ndarray:
    """Parse ``{"dim": d, "entries": [[...], ...]}`` (a bare nested list is accepted too)."""
    if isinstance(obj, dict):
        if "entries" not in obj:
            raise InputError("matrix object needs an 'entries' field")
        A = np.array(obj["entries"], dtype=float)
        dim = obj.get("dim", A.shape[0] if A.ndim else 0)
        if A.ndim != 2 or A.shape != (dim, dim):
            raise InputError(f"entries shape {A.shape} does not match dim {dim}")
        return A
    A = np.array(obj, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise InputError(f"expected a square matrix, got shape {A.shape}")
    return A
