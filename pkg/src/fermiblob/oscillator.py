"""Generalized harmonic oscillators ``H(z) = M z.z / 2`` and their eigenstates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matcore
from .capacity import PhaseSpaceEllipsoid, capacity
from .config import resolve_hbar
from .errors import InputError, LengthMismatchError, NotPositiveDefiniteError
from .symplectic import williamson

MAX_HERMITE_ORDER = 30
CLAIM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    M: np.ndarray
    hbar: float | None = None

    def __post_init__(self):
        M = matcore.as_symmetric(self.M)
        if M.shape[0] % 2:
            raise InputError(f"M must be 2n x 2n, got {M.shape}")
        if not matcore.is_positive_definite(M):
            raise NotPositiveDefiniteError("Hamiltonian matrix must be positive definite")
        object.__setattr__(self, "M", M)
        object.__setattr__(self, "hbar", resolve_hbar(self.hbar))

    @classmethod
    def from_frequencies(cls, omegas, hbar: float | None = None) -> QuadraticHamiltonian:
        """Normal-form oscillator ``sum omega_j (x_j^2 + p_j^2) / 2``."""
        w = np.asarray(omegas, dtype=float).reshape(-1)
        return cls(np.diag(np.concatenate([w, w])), hbar)

    @property
    def n(self) -> int:
        return self.M.shape[0] // 2

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", z, self.M, z)

    def normal_form(self) -> tuple[np.ndarray, np.ndarray]:
        """``(S, omegas)`` with ``S^T M S = diag(omegas, omegas)``."""
        return williamson(self.M)

    def to_json(self) -> dict:
        return {"n": self.n, "hbar": self.hbar, "M": matcore.matrix_to_json(self.M)}

    @classmethod
    def from_json(cls, obj: dict, hbar: float | None = None) -> QuadraticHamiltonian:
        if "M" not in obj:
            raise InputError("Hamiltonian object needs an 'M' field")
        H = cls(matcore.matrix_from_json(obj["M"]), obj.get("hbar", hbar))
        if "n" in obj and obj["n"] != H.n:
            raise InputError(f"n={obj['n']} does not match M of size {2 * H.n}")
        return H


def as_multi_index(N, n: int | None = None) -> tuple[int, ...]:
    if np.ndim(N) == 0:
        N = [N]
    out = []
    for k in N:
        if int(k) != k or k < 0:
            raise InputError(f"multi-index entries must be non-negative integers, got {k}")
        out.append(int(k))
    if n is not None and len(out) != n:
        raise LengthMismatchError(f"multi-index has {len(out)} entries, expected {n}")
    return tuple(out)


def hermite_polynomial(N: int, x):
    """Physicists' Hermite polynomial by ``H_{k+1} = 2x H_k - 2k H_{k-1}``."""
    if N < 0 or int(N) != N:
        raise InputError(f"N must be a non-negative integer, got {N}")
    if N > MAX_HERMITE_ORDER:
        raise InputError(f"N={N} exceeds the supported order {MAX_HERMITE_ORDER}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if N == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, N):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def hermite_function(N: int, x, omega: float = 1.0, hbar: float | None = None):
    """L2-normalized eigenfunction ``exp(-omega x^2/2hbar) H_N(x sqrt(omega/hbar))``.

    Eigenstate of ``(-hbar^2 d^2/dx^2 + omega^2 x^2) / 2`` with eigenvalue
    ``(N + 1/2) hbar omega``.
    """
    hbar = resolve_hbar(hbar)
    x = np.asarray(x, dtype=float)
    xi = x * math.sqrt(omega / hbar)
    norm = (omega / (math.pi * hbar)) ** 0.25 / math.sqrt(2.0**N * math.factorial(N))
    return norm * np.exp(-0.5 * xi * xi) * hermite_polynomial(N, xi)


def energy_level(omegas, N, hbar: float | None = None) -> float:
    """``sum_j (N_j + 1/2) hbar omega_j``."""
    hbar = resolve_hbar(hbar)
    w = np.atleast_1d(np.asarray(omegas, dtype=float))
    N = as_multi_index(N)
    if len(N) != w.shape[0]:
        raise LengthMismatchError(f"{w.shape[0]} frequencies but {len(N)} quantum numbers")
    return float(sum((k + 0.5) * hbar * om for k, om in zip(N, w)))


def excited_fermi_ellipsoid(H: QuadraticHamiltonian, N) -> PhaseSpaceEllipsoid:
    """Energy region ``{M z.z / 2 <= E_N}``, i.e. shape ``M`` at level ``2 E_N``.

    ``E_N`` uses the symplectic spectrum of ``M`` as frequencies.
    """
    N = as_multi_index(N, H.n)
    _, omegas = williamson(H.M)
    E = energy_level(omegas, N, H.hbar)
    return PhaseSpaceEllipsoid(np.zeros(2 * H.n), H.M, 2.0 * E)


@dataclass(frozen=True)
class ClaimReport:
    lhs: float
    rhs: float
    ratio: float
    match: bool
    expected_lhs: float

    def to_json(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "match": self.match,
            "expected_lhs": self.expected_lhs,
        }


def claim_check(H: QuadraticHamiltonian, N) -> ClaimReport:
    """Compare the capacity of the excited energy ellipsoid with ``sum (N_j + 1/2) h``.

    ``lhs`` comes from the generic capacity pipeline; ``expected_lhs`` is the
    closed form ``h sum (N_j + 1/2) omega_j / omega_max``. The two sides agree
    when n = 1 or the spectrum is isotropic, and differ otherwise.
    """
    N = as_multi_index(N, H.n)
    _, omegas = williamson(H.M)
    h = 2.0 * math.pi * H.hbar
    lhs = capacity(excited_fermi_ellipsoid(H, N))
    rhs = float(sum((k + 0.5) * h for k in N))
    expected = float(h * sum((k + 0.5) * om for k, om in zip(N, omegas)) / omegas.max())
    ratio = lhs / rhs
    return ClaimReport(lhs, rhs, ratio, abs(ratio - 1.0) <= CLAIM_TOL, expected)
