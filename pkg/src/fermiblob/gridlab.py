"""One-dimensional grid numerics that cross-check the closed forms.

Everything here works on uniform 1D grids: finite differences for the Fermi
operator and oscillator eigen-residuals, trapezoid quadrature for Wigner
transforms and for metaplectic (quadratic-phase) integral operators.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import gaussian
from .config import get_config, resolve_hbar
from .errors import (
    AllMaskedError,
    GridTooNarrowError,
    InputError,
    InsufficientDecayError,
    NoContourError,
    NumericalError,
    SingularBError,
)
from .oscillator import QuadraticHamiltonian, hermite_function
from .symplectic import williamson

MASK_TOL = 1e-6
MASK_DILATION = 4
DECAY_TOL = 1e-12
IMAG_TOL = 1e-10
SING_TOL = 1e-8
DET_TOL = 1e-9
WIGNER_ROW_BLOCK = 16
KERNEL_ROW_BLOCK = 256
# eigen_residual wants the grid to reach this multiple of the classical turning point
TURNING_POINT_FACTOR = 3.6
# |psi| < 1e-12 max|psi| beyond this many position standard deviations
COVER_SIGMAS = 11.0


@dataclass(frozen=True)
class Grid1D:
    xmin: float
    xmax: float
    count: int

    def __post_init__(self):
        if not self.xmax > self.xmin:
            raise InputError(f"grid needs xmax > xmin, got [{self.xmin}, {self.xmax}]")
        if self.count < 16:
            raise InputError(f"grid needs at least 16 points, got {self.count}")

    @classmethod
    def default(cls, hbar: float | None = None, count: int | None = None,
                half_width: float = 12.0) -> Grid1D:
        """``count`` points on ``[-half_width sqrt(hbar), half_width sqrt(hbar)]``."""
        hbar = resolve_hbar(hbar)
        count = get_config().grid_points if count is None else count
        L = half_width * math.sqrt(hbar)
        return cls(-L, L, count)

    @classmethod
    def from_samples(cls, x) -> Grid1D:
        x = np.asarray(x, dtype=float)
        if x.ndim != 1 or x.shape[0] < 16:
            raise InputError("need at least 16 grid abscissae")
        g = cls(float(x[0]), float(x[-1]), x.shape[0])
        if np.max(np.abs(x - g.x)) > 1e-9 * max(abs(g.xmin), abs(g.xmax)):
            raise InputError("abscissae are not uniformly spaced")
        return g

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.xmin, self.xmax, self.count)

    @property
    def dx(self) -> float:
        return (self.xmax - self.xmin) / (self.count - 1)

    def refined(self) -> Grid1D:
        """Same interval with half the spacing (every old node is kept)."""
        return Grid1D(self.xmin, self.xmax, 2 * self.count - 1)

    def trapezoid_weights(self) -> np.ndarray:
        w = np.full(self.count, self.dx)
        w[0] = w[-1] = 0.5 * self.dx
        return w


@dataclass(frozen=True, eq=False)
class SampledWavefunction:
    grid: Grid1D
    values: np.ndarray
    hbar: float

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (self.grid.count,):
            raise InputError(f"expected {self.grid.count} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v)):
            raise InputError("wavefunction samples must be finite")
        object.__setattr__(self, "values", v)
        if not self.norm() > 0:
            raise InputError("wavefunction has zero norm")

    def norm(self) -> float:
        """Trapezoid L2 norm."""
        return float(np.sqrt(np.sum(self.grid.trapezoid_weights() * np.abs(self.values) ** 2)))

    def amplitude_phase(self) -> tuple[np.ndarray, np.ndarray]:
        """``(R, Phi)`` with ``psi = R exp(i Phi / hbar)``; psi must not vanish."""
        R = np.abs(self.values)
        if np.min(R) <= MASK_TOL * np.max(R):
            raise InputError("phase extraction needs a nowhere-vanishing wavefunction")
        return R, self.hbar * np.unwrap(np.angle(self.values))

    @classmethod
    def from_amplitude_phase(cls, grid: Grid1D, R, Phi, hbar: float | None = None):
        hbar = resolve_hbar(hbar)
        return cls(grid, np.asarray(R) * np.exp(1j * np.asarray(Phi) / hbar), hbar)


def sample_gaussian(G: gaussian.GaussianState, grid: Grid1D | None = None) -> SampledWavefunction:
    if G.n != 1:
        raise InputError("grid sampling is one-dimensional (n = 1)")
    grid = Grid1D.default(G.hbar) if grid is None else grid
    return SampledWavefunction(grid, gaussian.eval_wavefunction(G, grid.x), G.hbar)


def sample_hermite(N: int, grid: Grid1D, omega: float = 1.0,
                   hbar: float | None = None) -> SampledWavefunction:
    hbar = resolve_hbar(hbar)
    return SampledWavefunction(grid, hermite_function(N, grid.x, omega, hbar), hbar)


# -- finite differences -------------------------------------------------------
# Results are padded with NaN where the stencil leaves the grid.

def _d1(f: np.ndarray, h: float) -> np.ndarray:
    out = np.full(f.shape, np.nan, dtype=f.dtype)
    out[1:-1] = (f[2:] - f[:-2]) / (2 * h)
    return out


def _d2(f: np.ndarray, h: float, order: int = 2) -> np.ndarray:
    out = np.full(f.shape, np.nan, dtype=f.dtype)
    if order == 2:
        out[1:-1] = (f[2:] - 2 * f[1:-1] + f[:-2]) / (h * h)
    elif order == 4:
        out[2:-2] = (-f[4:] + 16 * f[3:-1] - 30 * f[2:-2] + 16 * f[1:-3] - f[:-4]) / (12 * h * h)
    else:
        raise ValueError(f"unsupported stencil order {order}")
    return out


def _d1_order(f: np.ndarray, h: float, order: int) -> np.ndarray:
    if order == 2:
        return _d1(f, h)
    out = np.full(f.shape, np.nan, dtype=f.dtype)
    out[2:-2] = (-f[4:] + 8 * f[3:-1] - 8 * f[1:-3] + f[:-4]) / (12 * h)
    return out


def node_mask(R, tol: float = MASK_TOL, dilation: int = MASK_DILATION) -> np.ndarray:
    """Boolean mask of usable points: ``True`` away from nodes of ``R``.

    Nodes are samples with ``|R| < tol max|R|``, sign changes of ``R``, and
    dips of ``|R|`` (local minima below 1% of the maximum, which is how a
    node falling between samples of ``|psi|`` shows up). Each node is
    dilated by ``dilation`` cells so curvature stencils never straddle it.
    """
    R = np.asarray(R, dtype=float)
    a = np.abs(R)
    bad = (a < tol * a.max()) | (a == 0)
    flip = np.signbit(R[1:]) != np.signbit(R[:-1])
    flip &= (R[1:] != 0) & (R[:-1] != 0)
    bad[1:] |= flip
    bad[:-1] |= flip
    dip = np.zeros_like(bad)
    dip[1:-1] = (a[1:-1] <= a[:-2]) & (a[1:-1] <= a[2:]) & (a[1:-1] < 1e-2 * a.max())
    bad |= dip
    if dilation:
        bad = np.convolve(bad.astype(int), np.ones(2 * dilation + 1, dtype=int), "same") > 0
    return ~bad


@dataclass(frozen=True, eq=False)
class FermiResidual:
    residual_norm: float
    field_mask: np.ndarray
    field: np.ndarray


def fermi_operator_residual(R, Phi, grid: Grid1D, hbar: float | None = None) -> FermiResidual:
    """Apply the Fermi operator ``(-i hbar d - Phi')^2 + hbar^2 R''/R`` to ``R e^{i Phi/hbar}``.

    The kinetic part uses a gauge-covariant centered difference (the phase
    enters through link factors ``exp(-i (Phi_{j+-1} - Phi_j)/hbar)``),
    applied twice; the curvature term uses the compact 3-point second
    difference. The two discretizations differ at O(dx^2), so the residual
    converges to zero at second order and vanishes for constant ``R``.

    ``R`` may carry a sign (real eigenfunctions); nodes are masked.

    Returns:
        FermiResidual with the relative L2 residual over unmasked points
        (normalized by the curvature term), the mask, and the pointwise field.
    """
    hbar = resolve_hbar(hbar)
    R = np.asarray(R, dtype=float)
    Phi = np.asarray(Phi, dtype=float)
    if R.shape != (grid.count,) or Phi.shape != (grid.count,):
        raise InputError("R and Phi must be sampled on the grid")
    h = grid.dx
    psi = R * np.exp(1j * Phi / hbar)

    def covariant_d1(f):
        out = np.full(f.shape, np.nan, dtype=complex)
        up = np.exp(-1j * (Phi[2:] - Phi[1:-1]) / hbar)
        down = np.exp(-1j * (Phi[:-2] - Phi[1:-1]) / hbar)
        out[1:-1] = (up * f[2:] - down * f[:-2]) / (2 * h)
        return out

    kinetic = -(hbar**2) * covariant_d1(covariant_d1(psi))
    mask = node_mask(R)
    mask[:2] = mask[-2:] = False
    if not mask.any():
        raise AllMaskedError("no grid point survives the node mask")
    curv = np.zeros_like(R)
    R2 = _d2(R, h)
    curv[mask] = hbar**2 * R2[mask] / R[mask]
    field = np.where(mask, kinetic + curv * psi, 0.0)
    w = grid.trapezoid_weights()[mask]
    num = math.sqrt(np.sum(w * np.abs(field[mask]) ** 2))
    den = math.sqrt(np.sum(w * (hbar**2 * R2[mask]) ** 2))
    if den == 0.0:
        den = math.sqrt(np.sum(w * R[mask] ** 2))
    return FermiResidual(num / den, mask, field)


def eigen_residual(N: int, omega: float, grid: Grid1D, hbar: float | None = None,
                   energy: float | None = None, order: int = 4) -> float:
    """Relative L2 residual of ``H psi_N - E psi_N`` for ``H = (-hbar^2 d^2 + omega^2 x^2)/2``.

    ``energy`` defaults to ``(N + 1/2) hbar omega``. The default 4th-order
    stencil keeps the residual below 1e-5 up to N = 10 at 2048 points.
    """
    hbar = resolve_hbar(hbar)
    need = TURNING_POINT_FACTOR * math.sqrt((2 * N + 1) * hbar / omega)
    if min(-grid.xmin, grid.xmax) < need:
        raise GridTooNarrowError(f"grid must cover |x| <= {need:.4g} for N={N}")
    E = (N + 0.5) * hbar * omega if energy is None else energy
    x = grid.x
    psi = hermite_function(N, x, omega, hbar)
    Hpsi = 0.5 * (-(hbar**2) * _d2(psi, grid.dx, order) + omega**2 * x * x * psi)
    inner = slice(2, -2)
    w = grid.trapezoid_weights()[inner]
    r = (Hpsi - E * psi)[inner]
    return float(math.sqrt(np.sum(w * r * r)) / math.sqrt(np.sum(w * (E * psi[inner]) ** 2)))


def _check_decay(psi: SampledWavefunction) -> None:
    a = np.abs(psi.values)
    if max(a[0], a[-1]) > DECAY_TOL * a.max():
        raise InsufficientDecayError(
            f"wavefunction is {max(a[0], a[-1]) / a.max():.2e} of its maximum at the grid ends"
        )


def wigner_numeric(psi: SampledWavefunction, xs, ps, interp: str = "cubic") -> np.ndarray:
    """Wigner transform on the phase-space grid ``xs x ps`` by trapezoid quadrature.

    ``W(x,p) = (1/2 pi hbar) int exp(-i p y/hbar) psi(x + y/2) conj(psi(x - y/2)) dy``
    with ``y`` on a symmetric grid of the sample spacing; off-grid samples of
    psi come from a cubic spline (``interp="linear"`` for piecewise linear).

    Returns:
        real array of shape ``(len(xs), len(ps))``.
    """
    _check_decay(psi)
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ps = np.atleast_1d(np.asarray(ps, dtype=float))
    g, hbar = psi.grid, psi.hbar
    if interp == "cubic":
        spline = CubicSpline(g.x, psi.values)

        def sample(t):
            out = spline(t)
            out[(t < g.xmin) | (t > g.xmax)] = 0.0
            return out
    elif interp == "linear":
        def sample(t):
            return np.interp(t, g.x, psi.values.real, 0.0, 0.0) + 1j * np.interp(
                t, g.x, psi.values.imag, 0.0, 0.0)
    else:
        raise ValueError(f"unknown interpolation {interp!r}")
    hy = g.dx
    K = int(math.ceil((g.xmax - g.xmin) / hy))
    y = hy * np.arange(-K, K + 1)
    phase = np.exp(-1j * np.outer(ps, y) / hbar)
    W = np.empty((xs.shape[0], ps.shape[0]), dtype=complex)
    for start in range(0, xs.shape[0], WIGNER_ROW_BLOCK):
        xb = xs[start:start + WIGNER_ROW_BLOCK, None]
        f = sample(xb + 0.5 * y) * np.conj(sample(xb - 0.5 * y))
        W[start:start + WIGNER_ROW_BLOCK] = f @ phase.T
    W *= hy / (2 * math.pi * hbar)
    imag = np.max(np.abs(W.imag))
    if imag > IMAG_TOL * max(1.0, np.max(np.abs(W.real))):
        raise NumericalError(f"Wigner quadrature has imaginary part {imag:.3e}")
    return W.real


@dataclass(frozen=True)
class MetaplecticData:
    """A free 2x2 symplectic matrix ``[[A, B], [C, D]]`` plus a Maslov index."""

    A: float
    B: float
    C: float
    D: float
    maslov: int | None = None

    def __post_init__(self):
        if abs(self.B) <= SING_TOL:
            raise SingularBError(
                f"|B| = {abs(self.B):.3e} <= {SING_TOL:g}: no quadrature kernel; such a "
                "matrix must first be written as a product of two matrices with B != 0"
            )
        if abs(self.A * self.D - self.B * self.C - 1.0) > DET_TOL:
            raise InputError(f"AD - BC = {self.A * self.D - self.B * self.C} != 1")
        default = 0 if self.B > 0 else 1
        m = default if self.maslov is None else int(self.maslov)
        if m % 2 != default:
            raise InputError(f"Maslov index must be {'even' if default == 0 else 'odd'} "
                             f"when det B^-1 {'>' if default == 0 else '<'} 0")
        object.__setattr__(self, "maslov", m % 4)

    @classmethod
    def from_matrix(cls, S, maslov: int | None = None) -> MetaplecticData:
        S = np.asarray(S, dtype=float)
        if S.shape != (2, 2):
            raise InputError(f"expected a 2x2 symplectic matrix, got shape {S.shape}")
        return cls(float(S[0, 0]), float(S[0, 1]), float(S[1, 0]), float(S[1, 1]), maslov)

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.A, self.B], [self.C, self.D]])

    def alternate(self) -> MetaplecticData:
        """The other operator covering the same matrix (Maslov index + 2)."""
        return MetaplecticData(self.A, self.B, self.C, self.D, (self.maslov + 2) % 4)

    def to_json(self) -> dict:
        return {"A": self.A, "B": self.B, "C": self.C, "D": self.D, "maslov": self.maslov}

    @classmethod
    def from_json(cls, obj) -> MetaplecticData:
        if isinstance(obj, dict) and "A" in obj:
            try:
                return cls(float(obj["A"]), float(obj["B"]), float(obj["C"]), float(obj["D"]),
                           obj.get("maslov"))
            except KeyError as exc:
                raise InputError(f"metaplectic object is missing field {exc}") from exc
        from .matcore import matrix_from_json
        m = obj.get("maslov") if isinstance(obj, dict) else None
        return cls.from_matrix(matrix_from_json(obj), m)


def metaplectic_apply(S: MetaplecticData, psi: SampledWavefunction) -> SampledWavefunction:
    """Quadratic-phase integral operator covering ``S``, by trapezoid quadrature.

    ``(S psi)(x) = (2 pi i hbar)^(-1/2) i^m |B|^(-1/2) int exp(i W(x,x')/hbar) psi(x') dx'``
    with ``W = D x^2/2B - x x'/B + A x'^2/2B``. The square root of ``i`` is
    the principal one; the result is sampled on the input grid.
    """
    _check_decay(psi)
    g, hbar = psi.grid, psi.hbar
    x = g.x
    A, B, D = S.A, S.B, S.D
    pref = (2 * math.pi * hbar) ** -0.5 * np.exp(-0.25j * math.pi) * (1j) ** S.maslov
    pref /= math.sqrt(abs(B))
    src = np.exp(0.5j * A * x * x / (B * hbar)) * psi.values * g.trapezoid_weights()
    out = np.empty(g.count, dtype=complex)
    for start in range(0, g.count, KERNEL_ROW_BLOCK):
        xb = x[start:start + KERNEL_ROW_BLOCK]
        out[start:start + KERNEL_ROW_BLOCK] = np.exp(-1j * np.outer(xb, x) / (B * hbar)) @ src
    out *= pref * np.exp(0.5j * D * x * x / (B * hbar))
    return SampledWavefunction(g, out, hbar)


def phase_space_window(cov, count: int, width: float = 4.0) -> tuple[np.ndarray, np.ndarray]:
    """``count x count`` grid covering ``width`` standard deviations in x and p."""
    cov = np.asarray(cov, dtype=float)
    sx = math.sqrt(cov[0, 0])
    sp = math.sqrt(cov[1, 1])
    return np.linspace(-width * sx, width * sx, count), np.linspace(-width * sp, width * sp, count)


def covering_grid(var_x: float, hbar: float | None = None) -> Grid1D:
    """Default grid, widened at constant spacing until a Gaussian of position
    variance ``var_x`` decays below the quadrature threshold at its ends."""
    base = Grid1D.default(hbar)
    half = max(base.xmax, COVER_SIGMAS * math.sqrt(var_x))
    if half == base.xmax:
        return base
    count = int(math.ceil(2 * half / base.dx)) + 1
    return Grid1D(-half, half, count)


def metaplectic_grid(S: MetaplecticData, G: gaussian.GaussianState) -> Grid1D:
    """A grid on which both ``G`` and its image under ``S`` decay fully."""
    cov_in = gaussian.covariance(G)
    cov_out = S.matrix @ cov_in @ S.matrix.T
    return covering_grid(max(cov_in[0, 0], cov_out[0, 0]), G.hbar)


def covariance_check(S: MetaplecticData, G: gaussian.GaussianState, grid: Grid1D | None = None,
                     count: int = 48) -> dict:
    """Max deviation between ``W(S psi)(z)`` (quadrature) and ``W psi(S^-1 z)`` (closed form)."""
    if G.n != 1:
        raise InputError("metaplectic covariance is checked for n = 1 only")
    Sm = S.matrix
    cov_out = Sm @ gaussian.covariance(G) @ Sm.T
    grid = metaplectic_grid(S, G) if grid is None else grid
    psi = sample_gaussian(G, grid)
    out = metaplectic_apply(S, psi)
    xs, ps = phase_space_window(cov_out, count)
    W = wigner_numeric(out, xs, ps)
    Z = np.stack(np.meshgrid(xs, ps, indexing="ij"), axis=-1)
    Sinv = np.array([[S.D, -S.B], [-S.C, S.A]])
    ref = gaussian.wigner_closed_form(G, Z @ Sinv.T)
    return {"maxError": float(np.max(np.abs(W - ref))),
            "normRatio": out.norm() / psi.norm()}


def free_williamson_factor(M) -> MetaplecticData:
    """A Williamson factor of a 2x2 SPD matrix with the largest possible ``|B|``.

    Any ``S R`` with ``R`` a rotation diagonalizes ``M`` as well as ``S``;
    the rotation is chosen so the upper-right entry becomes the norm of the
    first row.
    """
    S, _ = williamson(M)
    if S.shape != (2, 2):
        raise InputError("free_williamson_factor needs a 2x2 matrix")
    theta = math.atan2(S[0, 0], S[0, 1])
    c, s = math.cos(theta), math.sin(theta)
    return MetaplecticData.from_matrix(S @ np.array([[c, s], [-s, c]]))


def ground_state_transport(S: MetaplecticData, H: QuadraticHamiltonian,
                           grid: Grid1D | None = None) -> dict:
    """Relative residual of ``H^ (S^ psi_0) = (hbar omega / 2)(S^ psi_0)``.

    ``H^`` is the Weyl quantization ``(a x^2 + b (x p + p x) + c p^2)/2`` of
    ``M = [[a, b], [b, c]]``, applied with 4th-order differences; ``S`` must
    satisfy ``S^T M S = omega I``.
    """
    if H.n != 1:
        raise InputError("ground-state transport is one-dimensional")
    hbar = H.hbar
    Sm = S.matrix
    omega = math.sqrt(np.linalg.det(H.M))
    if np.max(np.abs(Sm.T @ H.M @ Sm - omega * np.eye(2))) > 1e-8 * np.max(np.abs(H.M)):
        raise InputError("S is not a Williamson factor of H")
    grid = Grid1D.default(hbar) if grid is None else grid
    fiducial = gaussian.GaussianState(np.eye(1), hbar=hbar)
    psi = metaplectic_apply(S, sample_gaussian(fiducial, grid)).values
    x, h = grid.x, grid.dx
    (a, b), (_, c) = H.M
    dpsi = _d1_order(psi, h, 4)
    Hpsi = 0.5 * (a * x * x * psi - 1j * hbar * b * (2 * x * dpsi + psi)
                  - c * hbar**2 * _d2(psi, h, 4))
    E = 0.5 * hbar * omega
    inner = slice(2, -2)
    w = grid.trapezoid_weights()[inner]
    r = (Hpsi - E * psi)[inner]
    res = math.sqrt(np.sum(w * np.abs(r) ** 2)) / math.sqrt(np.sum(w * np.abs(E * psi[inner]) ** 2))
    return {"residual": float(res), "omega": omega}


def fermi_contour(R, Phi, grid: Grid1D, ps, hbar: float | None = None,
                  touch_tol: float = 1e-9) -> np.ndarray:
    """Zero set of ``g_F(x,p) = (p - Phi'(x))^2 + hbar^2 R''(x)/R(x)``.

    ``g_F`` is tabulated on ``grid.x x ps`` (nodes of R masked) and each
    grid edge whose endpoints change sign contributes a linearly
    interpolated crossing. Tangential zeros (double roots in p, as for a
    plane wave) are found as near-zero minima along p and refined with a
    parabola through the three neighbouring samples.

    Returns:
        array of shape (k, 2) holding (x, p) points.
    """
    hbar = resolve_hbar(hbar)
    R = np.asarray(R, dtype=float)
    Phi = np.asarray(Phi, dtype=float)
    ps = np.asarray(ps, dtype=float)
    x, h = grid.x, grid.dx
    mask = node_mask(R)
    mask[0] = mask[-1] = False
    if not mask.any():
        raise AllMaskedError("no grid point survives the node mask")
    dphi = _d1(Phi, h)
    curv = np.full(R.shape, np.nan)
    curv[mask] = hbar**2 * _d2(R, h)[mask] / R[mask]
    g = (ps[None, :] - dphi[:, None]) ** 2 + curv[:, None]
    pts = []
    # edges along x (fixed p)
    a, b = g[:-1, :], g[1:, :]
    hit = np.isfinite(a) & np.isfinite(b) & (a * b < 0)
    i, k = np.nonzero(hit)
    t = a[i, k] / (a[i, k] - b[i, k])
    pts.append(np.column_stack([x[i] + t * h, ps[k]]))
    # edges along p (fixed x)
    a, b = g[:, :-1], g[:, 1:]
    hit = np.isfinite(a) & np.isfinite(b) & (a * b < 0)
    i, k = np.nonzero(hit)
    t = a[i, k] / (a[i, k] - b[i, k])
    pts.append(np.column_stack([x[i], ps[k] + t * (ps[k + 1] - ps[k])]))
    # exact zeros on vertices
    i, k = np.nonzero(g == 0)
    pts.append(np.column_stack([x[i], ps[k]]))
    # tangential zeros: minima along p that almost touch zero
    scale = np.nanmax(np.abs(g))
    gm, g0, gp = g[:, :-2], g[:, 1:-1], g[:, 2:]
    cand = np.isfinite(gm) & np.isfinite(gp) & (g0 > 0) & (g0 <= gm) & (g0 <= gp)
    i, k = np.nonzero(cand)
    k = k + 1
    dp = ps[k + 1] - ps[k]
    gl, gc, gr = g[i, k - 1], g[i, k], g[i, k + 1]
    curvature = gl - 2 * gc + gr
    ok = curvature > 0
    shift = np.where(ok, 0.5 * (gl - gr) / np.where(ok, curvature, 1.0), 0.0)
    vertex = gc - 0.125 * (gl - gr) ** 2 / np.where(ok, curvature, 1.0)
    touch = ok & (np.abs(vertex) <= touch_tol * scale)
    pts.append(np.column_stack([x[i[touch]], ps[k[touch]] + shift[touch] * dp[touch]]))
    out = np.concatenate(pts, axis=0)
    if out.shape[0] == 0:
        raise NoContourError("g_F has constant sign on the sampled window")
    return out


# -- CSV exchange ----------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_field_csv(path, x, values) -> None:
    """``x,re,im`` rows for a complex field."""
    values = np.asarray(values, dtype=complex)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "re", "im"])
        for xi, v in zip(x, values):
            w.writerow([_fmt(xi), _fmt(v.real), _fmt(v.imag)])


def write_phase_space_csv(path, xs, ps, values) -> None:
    """``x,p,value`` rows, x-major."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "p", "value"])
        for i, xi in enumerate(xs):
            for k, pk in enumerate(ps):
                w.writerow([_fmt(xi), _fmt(pk), _fmt(values[i][k])])


def write_contour_csv(path, points) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "p"])
        for xi, pi in points:
            w.writerow([_fmt(xi), _fmt(pi)])


def read_fields_csv(path, hbar: float | None = None) -> tuple[Grid1D, np.ndarray, np.ndarray]:
    """Read ``(grid, R, Phi)`` from a CSV with header ``x,R,Phi`` or ``x,re,im``.

    A real field (``im`` identically zero) is taken as a signed ``R`` with
    zero phase. Any other complex field must not vanish anywhere; its
    amplitude and phase are extracted with the phase unwrapped.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [c.strip() for c in rows[0]]
    try:
        data = np.array([[float(c) for c in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if data.ndim != 2 or data.shape[1] != 3:
        raise InputError(f"{path}: expected three columns")
    grid = Grid1D.from_samples(data[:, 0])
    if header == ["x", "R", "Phi"]:
        return grid, data[:, 1], data[:, 2]
    if header == ["x", "re", "im"]:
        if not np.any(data[:, 2]):
            # real samples: keep the sign in R so nodes are handled by the mask
            return grid, data[:, 1], np.zeros(grid.count)
        psi = SampledWavefunction(grid, data[:, 1] + 1j * data[:, 2], resolve_hbar(hbar))
        R, Phi = psi.amplitude_phase()
        return grid, R, Phi
    raise InputError(f"{path}: header must be 'x,R,Phi' or 'x,re,im', got {','.join(header)}")
