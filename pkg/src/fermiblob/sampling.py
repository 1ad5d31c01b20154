"""Random generators for matrices, states and ellipsoids (tests and CLI demos)."""

from __future__ import annotations

import numpy as np

from .symplectic import standard_form


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.normal(size=(d, d)))
    return Q * np.sign(np.diag(R))


def random_spd(d: int, rng: np.random.Generator, log_spread: float = 2.0) -> np.ndarray:
    """SPD matrix with eigenvalues ``exp(U[-spread, spread])`` in a random basis."""
    Q = random_orthogonal(d, rng)
    w = np.exp(rng.uniform(-log_spread, log_spread, size=d))
    M = (Q * w) @ Q.T
    return 0.5 * (M + M.T)


def random_symmetric(d: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    A = rng.normal(scale=scale, size=(d, d))
    return 0.5 * (A + A.T)


def fermi_type_factor(X, Y) -> np.ndarray:
    """The symplectic matrix ``[[X^{1/2}, 0], [X^{-1/2} Y, X^{-1/2}]]``."""
    w, Q = np.linalg.eigh(X)
    Xh = (Q * np.sqrt(w)) @ Q.T
    Xmh = (Q / np.sqrt(w)) @ Q.T
    Z = np.zeros_like(Xh)
    return np.block([[Xh, Z], [Xmh @ Y, Xmh]])


def random_symplectic(n: int, rng: np.random.Generator, factors: int = 2,
                      log_spread: float = 1.0) -> np.ndarray:
    """Product of shear/squeeze factors interleaved with J.

    Built independently of :mod:`fermiblob.gaussian` so it can serve as test
    input for that module.
    """
    J = standard_form(n)
    S = np.eye(2 * n)
    for _ in range(factors):
        X = random_spd(n, rng, log_spread)
        Y = random_symmetric(n, rng, 0.7)
        S = S @ fermi_type_factor(X, Y)
        if rng.random() < 0.5:
            S = S @ J
    return S


def random_state_matrices(n: int, rng: np.random.Generator,
                          log_spread: float = 1.0) -> tuple[np.ndarray, np.ndarray]:
    """(X, Y) with X SPD and Y symmetric."""
    return random_spd(n, rng, log_spread), random_symmetric(n, rng, 0.7)
