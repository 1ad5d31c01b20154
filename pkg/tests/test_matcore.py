import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fermiblob import matcore
from fermiblob.errors import NonSymmetricError, NotPositiveDefiniteError
from fermiblob.sampling import random_spd

SQRT3 = math.sqrt(3.0)

small_symmetric = st.integers(1, 8).flatmap(
    lambda d: arrays(np.float64, (d, d), elements=st.floats(-10, 10, allow_subnormal=False))
).map(lambda A: 0.5 * (A + A.T))


def test_identity_eigenpairs():
    w, Q = matcore.eigh_sym(np.eye(3))
    assert np.allclose(w, 1.0)
    assert np.max(np.abs(Q @ Q.T - np.eye(3))) <= 1e-12


def test_diagonal_sorted_ascending():
    w, _ = matcore.eigh_sym(np.diag([2.0, 0.5]))
    assert w.tolist() == [0.5, 2.0]


def test_two_by_two_characteristic_polynomial():
    # lambda^2 - 4 lambda + 3 = 0
    w, Q = matcore.eigh_sym([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(w, [1.0, 3.0], atol=1e-14)
    assert np.allclose(abs(Q[0, 0]), 1 / math.sqrt(2), atol=1e-14)


def test_inverse_by_adjugate():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert np.allclose(matcore.inv_spd(A), np.array([[2.0, -1.0], [-1.0, 2.0]]) / 3, atol=1e-14)


def test_sqrt_closed_form():
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    ref = 0.5 * np.array([[1 + SQRT3, SQRT3 - 1], [SQRT3 - 1, 1 + SQRT3]])
    assert np.allclose(matcore.sqrt_spd(A), ref, atol=1e-14)
    assert np.allclose(matcore.invsqrt_spd(A), np.linalg.inv(ref), atol=1e-13)


def test_rejects_nonsymmetric():
    with pytest.raises(NonSymmetricError):
        matcore.eigh_sym([[1.0, 2.0], [0.0, 1.0]])


@pytest.mark.parametrize("A", [[[1.0, 0.0], [0.0, 0.0]], [[1.0, 2.0], [2.0, 1.0]], [[-1.0]]])
def test_rejects_non_positive(A):
    with pytest.raises(NotPositiveDefiniteError):
        matcore.sqrt_spd(A)
    assert not matcore.is_positive_definite(A)


def test_determinant():
    assert matcore.det([[2.0, 1.0], [1.0, 2.0]]) == pytest.approx(3.0, abs=1e-14)


def test_json_round_trip(rng):
    A = random_spd(4, rng)
    doc = matcore.matrix_to_json(A)
    assert doc["dim"] == 4
    assert np.array_equal(matcore.matrix_from_json(doc), A)
    assert np.array_equal(matcore.matrix_from_json(A.tolist()), A)


@pytest.mark.parametrize("d", [1, 2, 3, 5, 8])
def test_agrees_with_lapack(rng, d):
    for _ in range(20):
        A = random_spd(d, rng, log_spread=3.0)
        w, Q = matcore.eigh_sym(A)
        assert np.allclose(w, np.linalg.eigvalsh(A), rtol=1e-12, atol=1e-12 * np.abs(w).max())
        assert np.max(np.abs(Q @ Q.T - np.eye(d))) <= 1e-12


def test_hermitian_variant(rng):
    B = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    H = B + B.conj().T
    w, V = matcore.eigh_herm(H)
    assert np.allclose(w, np.linalg.eigvalsh(H), atol=1e-12)
    assert np.allclose(V @ np.diag(w) @ V.conj().T, H, atol=1e-12)


@settings(max_examples=150, deadline=None)
@given(small_symmetric)
def test_reconstruction(A):
    w, Q = matcore.eigh_sym(A)
    scale = max(1.0, np.abs(A).max())
    assert np.all(np.diff(w) >= 0)
    assert np.max(np.abs(Q @ Q.T - np.eye(A.shape[0]))) <= 1e-12
    assert np.max(np.abs(Q @ np.diag(w) @ Q.T - A)) <= 1e-10 * scale


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.integers(0, 2**31))
def test_spectral_mapping(d, seed):
    A = random_spd(d, np.random.default_rng(seed))
    root = matcore.sqrt_spd(A)
    assert np.allclose(root @ root, A, rtol=1e-10, atol=1e-10 * np.abs(A).max())
    w = matcore.eigh_sym(A)[0]
    wr = matcore.eigh_sym(root)[0]
    assert np.allclose(wr, np.sqrt(w), rtol=1e-10)
    assert np.allclose(matcore.inv_spd(A) @ A, np.eye(d), atol=1e-9)
