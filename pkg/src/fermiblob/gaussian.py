"""Generalized coherent states and their Fermi ellipsoids.

A state is parameterized by a positive-definite ``X`` and a symmetric ``Y``::

    psi(x) = (pi hbar)^(-n/4) (det X)^(1/4) exp(-(X + iY) x.x / 2 hbar)

Its Fermi function is the quadratic form ``M_F z.z - hbar Tr X`` with
``M_F = [[X^2 + Y^2, Y], [Y, I]]``, and its Wigner function is the Gaussian
``(pi hbar)^-n exp(-G z.z / hbar)`` with ``G = S^T S`` symplectic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matcore
from .capacity import PhaseSpaceEllipsoid
from .config import resolve_hbar
from .errors import InputError, NotPositiveDefiniteError

RS_TOL = 1e-12
SATURATION_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class GaussianState:
    X: np.ndarray
    Y: np.ndarray | None = None
    hbar: float | None = None

    def __post_init__(self):
        X = matcore.as_symmetric(np.atleast_2d(np.asarray(self.X, dtype=float)))
        if not matcore.is_positive_definite(X):
            raise NotPositiveDefiniteError("X must be positive definite")
        if self.Y is None:
            Y = np.zeros_like(X)
        else:
            Y = np.atleast_2d(np.asarray(self.Y, dtype=float))
            if Y.shape != X.shape:
                raise InputError(f"Y has shape {Y.shape}, X has shape {X.shape}")
            Y = matcore.as_symmetric(Y) if np.any(Y) else Y
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "hbar", resolve_hbar(self.hbar))

    @property
    def n(self) -> int:
        return self.X.shape[0]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "hbar": self.hbar,
            "X": matcore.matrix_to_json(self.X),
            "Y": matcore.matrix_to_json(self.Y),
        }

    @classmethod
    def from_json(cls, obj: dict, hbar: float | None = None) -> GaussianState:
        if "X" not in obj:
            raise InputError("state object needs an 'X' field")
        X = matcore.matrix_from_json(obj["X"])
        Y = matcore.matrix_from_json(obj["Y"]) if obj.get("Y") is not None else None
        G = cls(X, Y, obj.get("hbar", hbar))
        if "n" in obj and obj["n"] != G.n:
            raise InputError(f"n={obj['n']} does not match X of size {G.n}")
        return G


@dataclass(frozen=True, eq=False)
class FermiForm:
    """``g_F(z) = matrix z.z - level``; the Fermi ellipsoid is ``g_F <= 0``."""

    matrix: np.ndarray
    level: float

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return np.einsum("...i,ij,...j->...", z, self.matrix, z) - self.level

    def as_ellipsoid(self) -> PhaseSpaceEllipsoid:
        return PhaseSpaceEllipsoid(np.zeros(self.matrix.shape[0]), self.matrix, self.level)


def eval_wavefunction(G: GaussianState, x) -> np.ndarray:
    """Evaluate the state at points stacked on the last axis (any shape when n=1)."""
    x = np.asarray(x, dtype=float)
    if G.n == 1 and (x.ndim == 0 or x.shape[-1] != 1):
        x = x[..., None]
    if x.shape[-1] != G.n:
        raise InputError(f"points have {x.shape[-1]} coordinates, state has n={G.n}")
    h = G.hbar
    norm = (math.pi * h) ** (-G.n / 4) * matcore.det(G.X) ** 0.25
    qx = np.einsum("...i,ij,...j->...", x, G.X, x)
    qy = np.einsum("...i,ij,...j->...", x, G.Y, x)
    return norm * np.exp(-qx / (2 * h)) * np.exp(-1j * qy / (2 * h))


def fermi_function(G: GaussianState, z) -> np.ndarray:
    """``(p + Yx)^2 + X^2 x.x - hbar Tr X``, evaluated term by term."""
    z = np.asarray(z, dtype=float)
    x, p = z[..., : G.n], z[..., G.n :]
    kin = p + x @ G.Y.T
    Xx = x @ G.X.T
    return np.sum(kin * kin, axis=-1) + np.sum(Xx * Xx, axis=-1) - G.hbar * np.trace(G.X)


def fermi_form(G: GaussianState) -> FermiForm:
    X, Y = G.X, G.Y
    M = np.block([[X @ X + Y @ Y, Y], [Y, np.eye(G.n)]])
    return FermiForm(0.5 * (M + M.T), G.hbar * float(np.trace(X)))


def fermi_factorization(G: GaussianState) -> np.ndarray:
    """Symplectic ``S = [[X^{1/2}, 0], [X^{-1/2} Y, X^{-1/2}]]``.

    It satisfies ``S^T diag(X, X) S = M_F``.
    """
    Xh = matcore.sqrt_spd(G.X)
    Xmh = matcore.invsqrt_spd(G.X)
    return np.block([[Xh, np.zeros((G.n, G.n))], [Xmh @ G.Y, Xmh]])


def wigner_matrix(G: GaussianState) -> np.ndarray:
    """``[[X + Y X^-1 Y, Y X^-1], [X^-1 Y, X^-1]]``, which equals ``S^T S``."""
    Xi = matcore.inv_spd(G.X)
    X, Y = G.X, G.Y
    Gm = np.block([[X + Y @ Xi @ Y, Y @ Xi], [Xi @ Y, Xi]])
    return 0.5 * (Gm + Gm.T)


def wigner_closed_form(G: GaussianState, z) -> np.ndarray:
    """``(pi hbar)^-n exp(-Gmat z.z / hbar)`` at points stacked on the last axis."""
    z = np.asarray(z, dtype=float)
    Gm = wigner_matrix(G)
    q = np.einsum("...i,ij,...j->...", z, Gm, z)
    return (math.pi * G.hbar) ** (-G.n) * np.exp(-q / G.hbar)


def covariance(G: GaussianState) -> np.ndarray:
    """Phase-space covariance ``(hbar/2) Gmat^{-1}`` of the Wigner Gaussian."""
    return 0.5 * G.hbar * matcore.inv_spd(wigner_matrix(G))


def fermi_capacity(G: GaussianState) -> float:
    """``pi hbar Tr X / omega_max`` with ``omega_max`` the largest eigenvalue of X."""
    w, _ = matcore.eigh_sym(G.X)
    return float(math.pi * G.hbar * np.trace(G.X) / w[-1])


@dataclass(frozen=True)
class RSReport:
    covariance: np.ndarray
    per_axis: list[tuple[float, float]]
    holds: bool
    saturated: bool

    def to_json(self) -> dict:
        return {
            "covariance": matcore.matrix_to_json(self.covariance),
            "perAxis": [[lhs, rhs] for lhs, rhs in self.per_axis],
            "holds": self.holds,
            "saturated": self.saturated,
        }


def rs_check(G: GaussianState) -> RSReport:
    """Per-mode Schrodinger-Robertson inequalities on the covariance matrix.

    For each mode, ``lhs = var(x_j) var(p_j)`` and
    ``rhs = cov(x_j, p_j)^2 + hbar^2/4``. Product states saturate every mode;
    modes correlated with others give strict inequalities.
    """
    n, h = G.n, G.hbar
    cov = covariance(G)
    per_axis = []
    for j in range(n):
        lhs = float(cov[j, j] * cov[n + j, n + j])
        rhs = float(cov[j, n + j] ** 2 + h * h / 4)
        per_axis.append((lhs, rhs))
    holds = all(lhs >= rhs - RS_TOL for lhs, rhs in per_axis)
    saturated = all(abs(lhs - rhs) <= SATURATION_TOL for lhs, rhs in per_axis)
    return RSReport(cov, per_axis, holds, saturated)
