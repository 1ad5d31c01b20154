"""Phase-space ellipsoids, their symplectic capacities, and quantum blobs.

An ellipsoid ``{z : M (z - z0).(z - z0) <= r}`` has, for every intrinsic
symplectic capacity, the value ``pi r / lambda_max`` where ``lambda_max`` is
the largest symplectic eigenvalue of ``M``. Its Ekeland-Hofer capacities
are the sorted multiset ``{N pi r / lambda_j : N >= 1}``.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from . import matcore
from .config import get_config, resolve_hbar
from .errors import (
    ContainmentError,
    DegeneratePlaneError,
    InputError,
    NotPositiveDefiniteError,
    TooSmallError,
)
from .symplectic import symplectic_inverse, symplectic_spectrum, williamson

CONTAINMENT_SAMPLES = 10_000
CONTAINMENT_MARGIN = 1e-9


@dataclass(frozen=True, eq=False)
class PhaseSpaceEllipsoid:
    """The set ``{z : shape (z - center).(z - center) <= level}``."""

    center: np.ndarray
    shape: np.ndarray
    level: float = 1.0

    def __post_init__(self):
        shape = matcore.as_symmetric(self.shape)
        if shape.shape[0] % 2:
            raise InputError(f"phase-space dimension must be even, got {shape.shape[0]}")
        if not matcore.is_positive_definite(shape):
            raise NotPositiveDefiniteError("ellipsoid shape matrix is not positive definite")
        center = np.array(self.center, dtype=float).reshape(-1)
        if center.shape[0] != shape.shape[0]:
            raise InputError(
                f"center has length {center.shape[0]}, shape is {shape.shape[0]}x{shape.shape[0]}"
            )
        if not (self.level > 0 and math.isfinite(self.level)):
            raise InputError(f"level must be positive, got {self.level}")
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "level", float(self.level))

    @classmethod
    def ball(cls, n: int, radius: float, center=None) -> PhaseSpaceEllipsoid:
        c = np.zeros(2 * n) if center is None else center
        return cls(c, np.eye(2 * n), radius**2)

    @property
    def n(self) -> int:
        return self.shape.shape[0] // 2

    def normalize(self) -> PhaseSpaceEllipsoid:
        """Same point set at level 1."""
        return PhaseSpaceEllipsoid(self.center, self.shape / self.level, 1.0)

    def scaled(self, factor: float) -> PhaseSpaceEllipsoid:
        """The image under ``z -> factor * z``."""
        return PhaseSpaceEllipsoid(factor * self.center, self.shape / factor**2, self.level)

    def transformed(self, S) -> PhaseSpaceEllipsoid:
        """The image under the linear map ``z -> S z``."""
        S = np.asarray(S, dtype=float)
        Sinv = np.linalg.inv(S)
        return PhaseSpaceEllipsoid(S @ self.center, Sinv.T @ self.shape @ Sinv, self.level)

    def translated(self, shift) -> PhaseSpaceEllipsoid:
        return PhaseSpaceEllipsoid(self.center + np.asarray(shift, dtype=float), self.shape, self.level)

    def quadratic(self, z) -> np.ndarray:
        """``shape (z - center).(z - center) / level`` for points stacked on the last axis."""
        d = np.asarray(z, dtype=float) - self.center
        return np.einsum("...i,ij,...j->...", d, self.shape, d) / self.level

    def contains(self, z, tol: float = 0.0) -> np.ndarray:
        return self.quadratic(z) <= 1.0 + tol

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "center": self.center.tolist(),
            "shape": matcore.matrix_to_json(self.shape),
            "level": self.level,
        }

    @classmethod
    def from_json(cls, obj: dict) -> PhaseSpaceEllipsoid:
        try:
            shape = matcore.matrix_from_json(obj["shape"])
        except KeyError as exc:
            raise InputError("ellipsoid object needs a 'shape' field") from exc
        center = obj.get("center", [0.0] * shape.shape[0])
        E = cls(center, shape, obj.get("level", 1.0))
        if "n" in obj and obj["n"] != E.n:
            raise InputError(f"n={obj['n']} does not match shape of size {2 * E.n}")
        return E


@dataclass(frozen=True, eq=False)
class QuantumBlob:
    """``center + S(B(sqrt(hbar)))`` for a symplectic matrix ``S``."""

    center: np.ndarray
    map: np.ndarray
    hbar: float

    def __post_init__(self):
        object.__setattr__(self, "center", np.array(self.center, dtype=float).reshape(-1))
        object.__setattr__(self, "map", np.array(self.map, dtype=float))
        if self.map.shape != (self.center.shape[0],) * 2:
            raise InputError("blob map and center sizes disagree")
        if not self.hbar > 0:
            raise InputError(f"hbar must be positive, got {self.hbar}")

    @property
    def n(self) -> int:
        return self.center.shape[0] // 2

    def as_ellipsoid(self) -> PhaseSpaceEllipsoid:
        Sinv = symplectic_inverse(self.map)
        return PhaseSpaceEllipsoid(self.center, Sinv.T @ Sinv, self.hbar)

    def boundary_samples(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniformly random points of ``S(sphere of radius sqrt(hbar)) + center``."""
        w = rng.normal(size=(count, 2 * self.n))
        w *= math.sqrt(self.hbar) / np.linalg.norm(w, axis=1, keepdims=True)
        return w @ self.map.T + self.center

    def to_json(self) -> dict:
        return {
            "center": self.center.tolist(),
            "map": matcore.matrix_to_json(self.map),
            "hbar": self.hbar,
        }

    @classmethod
    def from_json(cls, obj: dict) -> QuantumBlob:
        try:
            return cls(obj["center"], matcore.matrix_from_json(obj["map"]), float(obj["hbar"]))
        except KeyError as exc:
            raise InputError(f"blob object is missing field {exc}") from exc


def capacity(E: PhaseSpaceEllipsoid) -> float:
    """Symplectic capacity ``pi r / lambda_max`` (the center is irrelevant)."""
    lam = symplectic_spectrum(E.shape)
    return float(math.pi * E.level / lam[-1])


def block_capacity(A, B) -> float:
    """Capacity of ``{A x.x + B p.p <= 1}`` as ``pi / sqrt(lambda_max(AB))``.

    ``AB`` is similar to the symmetric ``A^{1/2} B A^{1/2}``.
    """
    Ah = matcore.sqrt_spd(A)
    w, _ = matcore.eigh_sym(Ah @ matcore.as_symmetric(B) @ Ah)
    return math.pi / math.sqrt(w[-1])


def eh_capacities(E: PhaseSpaceEllipsoid, k: int) -> list[float]:
    """First ``k`` Ekeland-Hofer capacities of an ellipsoid.

    Lazily merges the n arithmetic progressions ``N * pi r / lambda_j``
    (N = 1, 2, ...) with a heap; equal values are repeated.
    """
    if k < 1:
        raise InputError(f"k must be >= 1, got {k}")
    lam = symplectic_spectrum(E.shape)
    steps = [float(math.pi * E.level / l) for l in lam]
    heap = [(step, 1, j) for j, step in enumerate(steps)]
    heapq.heapify(heap)
    out = []
    while len(out) < k:
        value, mult, j = heapq.heappop(heap)
        out.append(value)
        heapq.heappush(heap, ((mult + 1) * steps[j], mult + 1, j))
    return out


def plane_section_area(E: PhaseSpaceEllipsoid, u, v) -> float:
    """Area of the ellipse cut from ``E`` by the plane ``center + span(u, v)``.

    In the coordinates ``z = center + a u + b v`` the cut is
    ``Q (a, b).(a, b) <= r`` with ``Q`` the Gram form of ``u, v`` under the
    shape matrix, so its area is ``pi r sqrt(det G) / sqrt(det Q)`` where
    ``G`` is the Euclidean Gram matrix of ``u, v``; the factor ``sqrt(det G)``
    makes the result independent of the basis chosen for the plane.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    B = np.stack([u, v], axis=1)
    G = B.T @ B
    detG = G[0, 0] * G[1, 1] - G[0, 1] ** 2
    if detG <= 1e-12 * G[0, 0] * G[1, 1]:
        raise DegeneratePlaneError("u and v are (nearly) collinear")
    Q = B.T @ E.shape @ B
    detQ = Q[0, 0] * Q[1, 1] - Q[0, 1] ** 2
    return math.pi * E.level * math.sqrt(detG / detQ)


def plane_section_symplectic_area(E: PhaseSpaceEllipsoid, u, v) -> float:
    """Symplectic area ``|integral of dp^dx|`` of the same cut.

    Equals the Euclidean area times ``|sigma(e1, e2)|`` for an orthonormal
    basis ``e1, e2`` of the plane; it is zero on Lagrangian planes and is
    preserved by linear symplectic maps.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    n = u.shape[0] // 2
    B = np.stack([u, v], axis=1)
    G = B.T @ B
    if G[0, 0] * G[1, 1] - G[0, 1] ** 2 <= 1e-12 * G[0, 0] * G[1, 1]:
        raise DegeneratePlaneError("u and v are (nearly) collinear")
    Q = B.T @ E.shape @ B
    detQ = Q[0, 0] * Q[1, 1] - Q[0, 1] ** 2
    omega = float(u[n:] @ v[:n] - u[:n] @ v[n:])
    return math.pi * E.level * abs(omega) / math.sqrt(detQ)


def is_quantum_blob(E: PhaseSpaceEllipsoid, tol: float | None = None,
                    hbar: float | None = None) -> bool:
    """True iff every symplectic eigenvalue of ``shape/level`` is ``1/hbar``.

    Equivalently ``E = S(B(sqrt(hbar))) + center`` for a symplectic ``S``.
    The comparison is relative: ``|hbar * lambda_j - 1| <= tol``.
    """
    hbar = resolve_hbar(hbar)
    tol = get_config().tol if tol is None else tol
    lam = symplectic_spectrum(E.shape / E.level)
    return bool(np.all(np.abs(hbar * lam - 1.0) <= tol))


def containment_margin(E: PhaseSpaceEllipsoid, blob: QuantumBlob,
                       samples: int = CONTAINMENT_SAMPLES, seed: int | None = None) -> float:
    """Smallest ``1 - q(z)`` over random boundary points ``z`` of ``blob``.

    ``q`` is E's normalized quadratic form; a non-negative margin means every
    sampled point lies in ``E``.
    """
    seed = get_config().seed if seed is None else seed
    pts = blob.boundary_samples(samples, np.random.default_rng(seed))
    return float(np.min(1.0 - E.quadratic(pts)))


def inscribed_quantum_blob(E: PhaseSpaceEllipsoid, hbar: float | None = None,
                           samples: int = CONTAINMENT_SAMPLES,
                           seed: int | None = None) -> QuantumBlob:
    """A quantum blob inside ``E``, built in E's Williamson frame.

    With ``S^T (M/r) S = diag(Lambda, Lambda)``, ``E`` is
    ``center + S{sum lambda_j (x_j^2 + p_j^2) <= 1}`` and the blob is
    ``center + S(B(sqrt(hbar)))``, which fits because
    ``hbar * lambda_max <= 1`` whenever ``capacity(E) >= pi hbar``.
    Containment is certified on random boundary points.

    Raises:
        TooSmallError: if ``capacity(E) < pi hbar (1 - 1e-9)``.
    """
    hbar = resolve_hbar(hbar)
    S, lam = williamson(E.shape / E.level)
    cap = math.pi / lam[-1]
    if cap < math.pi * hbar * (1.0 - 1e-9):
        raise TooSmallError(f"capacity {cap:.6g} is below pi*hbar = {math.pi * hbar:.6g}")
    blob = QuantumBlob(E.center, S, hbar)
    margin = containment_margin(E, blob, samples, seed)
    if margin < -CONTAINMENT_MARGIN:
        raise ContainmentError(f"inscribed blob leaves the ellipsoid (margin {margin:.3e})")
    return blob
