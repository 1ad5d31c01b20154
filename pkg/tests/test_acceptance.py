"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even
without ``-s``) or directly with ``python3 tests/test_acceptance.py``.
"""

import itertools
import math
import sys
import time

import numpy as np
import pytest

from fermiblob import gridlab as gl
from fermiblob.capacity import (
    PhaseSpaceEllipsoid,
    QuantumBlob,
    capacity,
    containment_margin,
    eh_capacities,
    inscribed_quantum_blob,
    plane_section_area,
    plane_section_symplectic_area,
)
from fermiblob.gaussian import (
    GaussianState,
    covariance,
    fermi_capacity,
    fermi_factorization,
    fermi_form,
    wigner_closed_form,
    wigner_matrix,
)
from fermiblob.oscillator import QuadraticHamiltonian, claim_check, hermite_function
from fermiblob.sampling import random_spd, random_state_matrices, random_symplectic
from fermiblob.symplectic import standard_form, symplectic_spectrum, williamson

PI = math.pi
SEED = 7


def report(capsys, number, passed, detail):
    line = f"{'PASS' if passed else 'FAIL'} criterion {number}: {detail}"
    if capsys is None:
        print(line)
    else:
        with capsys.disabled():
            print("\n" + line)
    assert passed, line


def rng_for(number):
    return np.random.default_rng([SEED, number])


def test_criterion_01_williamson(capsys):
    rng = rng_for(1)
    mats = [random_spd(2 * (i % 3 + 1), rng, log_spread=2.0) for i in range(1000)]
    worst_diag = worst_symp = 0.0
    start = time.perf_counter()
    for M in mats:
        n = M.shape[0] // 2
        S, lam = williamson(M)
        D = np.diag(np.concatenate([lam, lam]))
        J = standard_form(n)
        worst_diag = max(worst_diag, np.max(np.abs(S.T @ M @ S - D)) / np.max(np.sum(np.abs(M), axis=1)))
        worst_symp = max(worst_symp, np.max(np.abs(S.T @ J @ S - J)))
    elapsed = time.perf_counter() - start
    ok = worst_diag <= 1e-8 and worst_symp <= 1e-8 and elapsed < 5.0
    report(capsys, 1, ok, f"1000 matrices, diag residual/|M| {worst_diag:.2e}, "
                          f"symplectic residual {worst_symp:.2e}, {elapsed:.2f} s")


def test_criterion_02_capacity_axioms(capsys):
    rng = rng_for(2)
    norm_err = max(abs(capacity(PhaseSpaceEllipsoid.ball(n, R)) - PI * R * R) / (PI * R * R)
                   for n in (1, 2, 3) for R in (0.3, 1.0, 2.7))
    conf_err = inv_err = 0.0
    violations = 0
    for i in range(500):
        n = i % 3 + 1
        E = PhaseSpaceEllipsoid(rng.normal(size=2 * n), random_spd(2 * n, rng), float(np.exp(rng.uniform(-1, 1))))
        c = capacity(E)
        lam = float(np.exp(rng.uniform(-1, 1)))
        conf_err = max(conf_err, abs(capacity(E.scaled(lam)) - lam * lam * c) / (lam * lam * c))
        inv_err = max(inv_err, abs(capacity(E.transformed(random_symplectic(n, rng))) - c) / c)
        outer = random_spd(2 * n, rng)
        inner = outer + random_spd(2 * n, rng, log_spread=3.0) * float(np.exp(rng.uniform(-6, 0)))
        z = np.zeros(2 * n)
        if capacity(PhaseSpaceEllipsoid(z, inner)) > capacity(PhaseSpaceEllipsoid(z, outer)):
            violations += 1
    ok = norm_err <= 1e-12 and conf_err <= 1e-7 and inv_err <= 1e-7 and violations == 0
    report(capsys, 2, ok, f"normalization {norm_err:.1e}, conformality {conf_err:.1e}, "
                          f"invariance {inv_err:.1e}, monotonicity violations {violations}/500")


def test_criterion_03_eh(capsys):
    worst = 0.0
    for n in (1, 2, 3):
        for R in (0.5, 1.0, 1.7):
            got = eh_capacities(PhaseSpaceEllipsoid.ball(n, R), 30)
            ref = [math.ceil(k / n) * PI * R * R for k in range(1, 31)]
            worst = max(worst, max(abs(a - b) / b for a, b in zip(got, ref)))
    E = PhaseSpaceEllipsoid(np.zeros(4), np.diag([1.0, 2.0, 1.0, 2.0]), 1.0 * (1.0 + 2.0))
    seq = eh_capacities(E, 4)
    seq_err = max(abs(a - b) for a, b in zip(seq, [1.5 * PI, 3 * PI, 3 * PI, 4.5 * PI]))
    ok = worst <= 1e-12 and seq_err <= 1e-12
    report(capsys, 3, ok, f"ball formula rel. error {worst:.1e}, worked example error {seq_err:.1e}")


def test_criterion_04_factorization(capsys):
    rng = rng_for(4)
    fac = wig = spec = 0.0
    for i in range(500):
        n = i % 3 + 1
        G = GaussianState(*random_state_matrices(n, rng))
        S = fermi_factorization(G)
        Z = np.zeros((n, n))
        D = np.block([[G.X, Z], [Z, G.X]])
        fac = max(fac, np.max(np.abs(S.T @ D @ S - fermi_form(G).matrix)))
        Gm = wigner_matrix(G)
        wig = max(wig, np.max(np.abs(S.T @ S - Gm)))
        spec = max(spec, np.max(np.abs(symplectic_spectrum(Gm) - 1.0)))
    ok = fac <= 1e-9 and wig <= 1e-9 and spec <= 1e-8
    report(capsys, 4, ok, f"factorization {fac:.1e}, Wigner matrix {wig:.1e}, spectrum(Gmat)-1 {spec:.1e}")


def test_criterion_05_capacity_bounds(capsys):
    rng = rng_for(5)
    violations = 0
    for i in range(500):
        n = i % 3 + 1
        hbar = float(np.exp(rng.uniform(-1, 1)))
        G = GaussianState(*random_state_matrices(n, rng), hbar)
        c = fermi_capacity(G)
        h = 2 * PI * hbar
        if not (0.5 * h * (1 - 1e-12) <= c <= n * h / 2 * (1 + 1e-12)):
            violations += 1
    eq = abs(fermi_capacity(GaussianState([[0.37]], [[1.2]])) - PI)
    for n in (1, 2, 3):
        eq = max(eq, abs(fermi_capacity(GaussianState(1.9 * np.eye(n), np.ones((n, n)))) - n * PI))
    ok = violations == 0 and eq <= 1e-12
    report(capsys, 5, ok, f"bound violations {violations}/500, equality-case error {eq:.1e}")


def test_criterion_06_quantum_blobs(capsys):
    rng = rng_for(6)
    worst = 0.0
    failures = {1: 0, 2: 0, 3: 0}
    for i in range(200):
        n = i % 3 + 1
        hbar = float(np.exp(rng.uniform(-1, 1)))
        E = QuantumBlob(rng.normal(size=2 * n), random_symplectic(n, rng), hbar).as_ellipsoid()
        e = np.eye(2 * n)
        J = standard_form(n)
        areas = [plane_section_area(E, e[j], e[n + j]) for j in range(n)]
        u = rng.normal(size=2 * n)
        areas.append(plane_section_symplectic_area(E, u, J @ u))
        err = max(abs(a - PI * hbar) / (PI * hbar) for a in areas)
        worst = max(worst, err)
        if err > 1e-8:
            failures[n] += 1
    margin = math.inf
    for i in range(200):
        n = i % 3 + 1
        G = GaussianState(*random_state_matrices(n, rng))
        E = fermi_form(G).as_ellipsoid()
        blob = inscribed_quantum_blob(E, hbar=G.hbar, seed=i)
        margin = min(margin, containment_margin(E, blob, seed=i))
    ok = worst <= 1e-8 and margin >= -1e-9
    report(capsys, 6, ok, f"section area = pi*hbar: worst rel. error {worst:.2e}, failing blobs "
                          f"by n {failures}; inscribed-blob margin {margin:.2e}")


def test_criterion_07_grid(capsys):
    rng = rng_for(7)
    grid = gl.Grid1D(-12.0, 12.0, 2048)
    start = time.perf_counter()
    werr = 0.0
    for _ in range(20):
        G = GaussianState([[float(np.exp(rng.uniform(-0.7, 0.7)))]], [[float(rng.normal(scale=0.7))]])
        xs, ps = gl.phase_space_window(covariance(G), 64)
        Z = np.stack(np.meshgrid(xs, ps, indexing="ij"), axis=-1)
        W = gl.wigner_numeric(gl.sample_gaussian(G, grid), xs, ps)
        werr = max(werr, np.max(np.abs(W - wigner_closed_form(G, Z))))
    elapsed = time.perf_counter() - start
    coarse = gl.Grid1D(-8.0, 8.0, 257)
    res = [gl.fermi_operator_residual(np.exp(-g.x**2 / 2), np.zeros(g.count), g).residual_norm
           for g in (coarse, coarse.refined())]
    ratio = res[0] / res[1]
    herm = 0.0
    for N in range(11):
        half = max(12.0, gl.TURNING_POINT_FACTOR * math.sqrt(2 * N + 1))
        count = int(round(2 * half / grid.dx)) + 1
        herm = max(herm, gl.eigen_residual(N, 1.0, gl.Grid1D(-half, half, count)))
    ok = werr <= 1e-6 and elapsed < 30 and 3.5 <= ratio <= 4.5 and herm <= 1e-5
    report(capsys, 7, ok, f"Wigner max error {werr:.1e} in {elapsed:.1f} s, Richardson ratio {ratio:.3f}, "
                          f"Hermite residual (N<=10) {herm:.1e}")


def test_criterion_08_metaplectic(capsys):
    rng = rng_for(8)
    norm_err = cov_err = 0.0
    flips_exact = True
    for _ in range(20):
        while True:
            A, B, C = rng.uniform(-1.5, 1.5, size=3)
            if abs(A) > 0.3 and abs(B) >= 0.3:
                break
        S = gl.MetaplecticData(A, B, C, (1 + B * C) / A)
        G = GaussianState([[float(np.exp(rng.uniform(-0.7, 0.7)))]], [[float(rng.normal(scale=0.7))]])
        res = gl.covariance_check(S, G)
        norm_err = max(norm_err, abs(res["normRatio"] - 1.0))
        cov_err = max(cov_err, res["maxError"])
        psi = gl.sample_gaussian(G, gl.metaplectic_grid(S, G))
        a = gl.metaplectic_apply(S, psi).values
        b = gl.metaplectic_apply(S.alternate(), psi).values
        flips_exact &= bool(np.array_equal(a, -b))
    ok = norm_err <= 1e-4 and cov_err <= 1e-4 and flips_exact
    report(capsys, 8, ok, f"norm error {norm_err:.1e}, covariance error {cov_err:.1e}, "
                          f"exact sign flip {flips_exact}")


def test_criterion_09_claim(capsys):
    one_d = all(claim_check(QuadraticHamiltonian.from_frequencies([w]), [N]).match
                for w in (0.5, 1.0, 3.0) for N in range(11))
    iso = True
    for n in (1, 2, 3):
        for N in itertools.product(range(7), repeat=n):
            if sum(N) <= 6:
                iso &= claim_check(QuadraticHamiltonian.from_frequencies([1.3] * n), list(N)).match
    r = claim_check(QuadraticHamiltonian.from_frequencies([1.0, 2.0]), [0, 1])
    aniso = abs(r.ratio - 0.875) <= 1e-9 and not r.match and abs(r.expected_lhs - r.lhs) <= 1e-9
    ok = one_d and iso and aniso
    report(capsys, 9, ok, f"n=1 all match {one_d}, isotropic all match {iso}, "
                          f"(1,2)/(0,1) ratio {r.ratio:.12f} match {r.match}")


def test_criterion_10_contour(capsys):
    worst = 0.0
    for hbar in (1.0, 0.5):
        grid = gl.Grid1D.default(hbar, 2048)
        ps = np.linspace(-6 * math.sqrt(hbar), 6 * math.sqrt(hbar), 2048)
        for N in range(6):
            R = hermite_function(N, grid.x, 1.0, hbar)
            pts = gl.fermi_contour(R, np.zeros(grid.count), grid, ps, hbar)
            r = np.hypot(pts[:, 0], pts[:, 1])
            worst = max(worst, np.max(np.abs(r - math.sqrt((2 * N + 1) * hbar))) / grid.dx)
    ok = worst <= 2.0
    report(capsys, 10, ok, f"max radial deviation {worst:.3f} grid spacings (N = 0..5, hbar = 1, 0.5)")


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn(None)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
