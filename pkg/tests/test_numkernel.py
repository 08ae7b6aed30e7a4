import numpy as np
import pytest
from hypothesis import given, strategies as st

from weylscatter import numkernel as nk
from weylscatter.errors import (
    IndefiniteInput,
    NonFiniteInput,
    NonHermitianInput,
    SingularMatrix,
)

from conftest import random_hermitian, random_psd


def test_herm_eig_reconstructs(rng):
    h = random_hermitian(rng, 7)
    eig = nk.herm_eig(h)
    assert np.all(np.diff(eig.eigenvalues) >= 0)
    assert np.linalg.norm(eig.reconstruct() - h) < 1e-12 * np.linalg.norm(h)
    v = eig.eigenvectors
    assert np.allclose(v.conj().T @ v, np.eye(7), atol=1e-13)


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitianInput):
        nk.herm_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_non_finite_rejected():
    with pytest.raises(NonFiniteInput):
        nk.herm_eig(np.array([[np.nan]]))


def test_psd_sqrt_of_known_matrix():
    # [[2,1],[1,2]] = V diag(1,3) V^T, sqrt has entries (1 +- sqrt 3)/2
    r = nk.psd_sqrt(np.array([[2.0, 1.0], [1.0, 2.0]]))
    a, b = (np.sqrt(3) + 1) / 2, (np.sqrt(3) - 1) / 2
    assert np.allclose(r, [[a, b], [b, a]], atol=1e-15)


def test_psd_sqrt_clips_roundoff_and_rejects_indefinite():
    h = np.diag([1.0, -1e-14])
    r = nk.psd_sqrt(h)
    assert r[1, 1] == 0.0
    with pytest.raises(IndefiniteInput):
        nk.psd_sqrt(np.diag([1.0, -1e-3]))


@given(st.integers(1, 8), st.integers(0, 8), st.integers(0, 2**31 - 1))
def test_psd_sqrt_squares_back(n, rank, seed):
    rng = np.random.default_rng(seed)
    h = random_psd(rng, n, min(rank, n))
    r = nk.psd_sqrt(h)
    assert np.allclose(r, r.conj().T, atol=1e-14 * (1 + np.linalg.norm(h)))
    assert np.linalg.norm(r @ r - h) <= 1e-10 * (1 + np.linalg.norm(h))


def test_solve_vector_and_matrix(rng):
    a = rng.standard_normal((5, 5)) + 5 * np.eye(5)
    b = rng.standard_normal(5)
    res = nk.solve(a, b)
    assert res.x.shape == (5,)
    assert np.allclose(a @ res.x, b)
    assert res.cond >= 1.0
    assert np.allclose(a @ nk.solve(a, np.eye(5)).x, np.eye(5))


def test_solve_singular():
    with pytest.raises(SingularMatrix):
        nk.solve(np.array([[1.0, 1.0], [1.0, 1.0]]), np.ones(2))
    with pytest.raises(SingularMatrix):
        nk.solve(np.diag([1.0, 1e-14]), np.ones(2), cond_cap=1e12)


def test_solve_shape_errors():
    with pytest.raises(ValueError):
        nk.solve(np.ones((2, 3)), np.ones(2))
    with pytest.raises(ValueError):
        nk.solve(np.eye(2), np.ones(3))


def test_singular_values_descending(rng):
    a = rng.standard_normal((6, 4))
    s = nk.singular_values(a)
    assert np.all(np.diff(s) <= 0)
    assert np.allclose(s, np.linalg.svd(a, compute_uv=False))


def test_imag_part_is_hermitian_part_of_minus_i():
    m = np.array([[1 + 2j, 3j], [1.0, -1j]])
    im = nk.imag_part(m)
    assert np.allclose(im, (m - m.conj().T) / 2j)
    assert np.allclose(nk.hermitian_part(m), (m + m.conj().T) / 2)
