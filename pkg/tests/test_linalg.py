import numpy as np
import pytest
from hypothesis import given, strategies as st

from majorize import linalg as la
from majorize.errors import BadSpectrum, NonHermitian, NonSquare, NoConvergence

from conftest import random_hermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 8)


def test_eig_identity():
    e = la.hermitian_eig(np.eye(3))
    np.testing.assert_array_equal(e.eigenvalues, [1, 1, 1])
    np.testing.assert_allclose(e.eigenvectors, np.eye(3))


def test_eig_diagonal_sorted():
    e = la.hermitian_eig(np.diag([0.2, 0.7, 0.1]))
    np.testing.assert_allclose(e.eigenvalues, [0.7, 0.2, 0.1], atol=1e-15)


def test_eig_pauli_x():
    # characteristic polynomial t^2 - 1
    e = la.hermitian_eig(np.array([[0, 1], [1, 0]]))
    np.testing.assert_allclose(e.eigenvalues, [1, -1], atol=1e-15)


def test_eig_rejects_non_hermitian():
    with pytest.raises(NonHermitian):
        la.hermitian_eig(np.array([[0, 1], [0, 0]]))


def test_eig_no_convergence():
    a = random_hermitian(6, np.random.default_rng(1))
    with pytest.raises(NoConvergence):
        la.hermitian_eig(a, max_sweeps=1)


def test_eig_ties_keep_diagonal_order():
    e = la.hermitian_eig(np.diag([0.5, 0.2, 0.5]))
    np.testing.assert_allclose(np.abs(e.eigenvectors[:, 0]), [1, 0, 0])
    np.testing.assert_allclose(np.abs(e.eigenvectors[:, 1]), [0, 0, 1])


@given(n=dims, seed=seeds, scale=st.sampled_from([1e-6, 1.0, 1e3]))
def test_eig_reconstruction_against_numpy(n, seed, scale):
    a = random_hermitian(n, np.random.default_rng(seed), scale)
    w, v = la.hermitian_eig(a)
    assert np.all(np.diff(w) <= 0)
    tol = 1e-9 * max(1.0, scale)
    assert la.max_abs(a @ v - v * w) <= tol
    assert la.max_abs(v.conj().T @ v - np.eye(n)) <= 1e-9
    assert la.max_abs((v * w) @ v.conj().T - a) <= tol
    assert abs(np.trace(a).real - w.sum()) <= tol
    # independent oracle: LAPACK
    np.testing.assert_allclose(w, np.linalg.eigvalsh(a)[::-1], atol=tol)
    # phase convention
    idx = np.argmax(np.abs(v), axis=0)
    pivots = v[idx, np.arange(n)]
    assert np.all(pivots.imag == 0) and np.all(pivots.real > 0)


@given(n=dims, seed=seeds, shift=st.floats(-5, 5))
def test_eig_shift(n, seed, shift):
    a = random_hermitian(n, np.random.default_rng(seed))
    w = la.spectrum(a)
    np.testing.assert_allclose(la.spectrum(a + shift * np.eye(n)), w + shift, atol=1e-9)


def test_is_psd():
    assert la.is_psd(np.eye(2))
    assert not la.is_psd(np.diag([1, -0.5]))


def test_haar_scalar():
    u = la.random_haar_unitary(1, 5)
    assert u.shape == (1, 1) and abs(abs(u[0, 0]) - 1) < 1e-15


@given(n=dims, seed=seeds)
def test_haar_unitary_and_deterministic(n, seed):
    u = la.random_haar_unitary(n, seed)
    assert la.max_abs(u.conj().T @ u - np.eye(n)) <= 1e-9
    np.testing.assert_array_equal(u, la.random_haar_unitary(n, seed))


@pytest.mark.parametrize("n", [2, 3, 5])
def test_haar_first_entry_mean(n):
    rng = la.make_rng(99)
    x = np.array([abs(la.random_haar_unitary(n, rng)[0, 0]) ** 2 for _ in range(10_000)])
    se = x.std(ddof=1) / np.sqrt(x.size)
    assert abs(x.mean() - 1 / n) <= 5 * se


def test_random_density_pure_and_mixed():
    n = 4
    pure = la.random_density(n, [1, 0, 0, 0], seed=3)
    np.testing.assert_allclose(pure @ pure, pure, atol=1e-12)
    mixed = la.random_density(n, np.full(n, 1 / n), seed=3)
    np.testing.assert_allclose(mixed, np.eye(n) / n, atol=1e-15)


@given(n=st.integers(2, 8), seed=seeds)
def test_random_density_matches_sampled_spectrum(n, seed):
    rho = la.random_density(n, seed=seed)
    p = la.sample_simplex(n, la.make_rng(seed))
    np.testing.assert_allclose(la.spectrum(rho), np.sort(p)[::-1], atol=1e-9)
    la.as_density(rho)


def test_random_density_bad_spectrum():
    with pytest.raises(BadSpectrum):
        la.random_density(2, [0.7, 0.7])
    with pytest.raises(BadSpectrum):
        la.random_density(3, [0.5, 0.5])


def test_vectorize_examples():
    np.testing.assert_array_equal(la.vectorize(np.eye(2)), [1, 0, 0, 1])
    a, b, c, d = 1 + 2j, 3, -4j, 5
    np.testing.assert_array_equal(la.vectorize(np.array([[a, b], [c, d]])), [a, b, c, d])
    with pytest.raises(NonSquare):
        la.vectorize(np.ones((2, 3)))


@given(n=dims, seed=seeds)
def test_vectorize_round_trip_and_identity_convention(n, seed):
    rng = np.random.default_rng(seed)
    k = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    np.testing.assert_array_equal(la.devectorize(la.vectorize(k)), k)
    one = la.vectorize(np.eye(n))
    np.testing.assert_allclose(la.vectorize(k), np.kron(k, np.eye(n)) @ one)


def test_trial_streams_are_independent_of_order():
    a = [la.trial_rng(7, i).random() for i in range(5)]
    b = [la.trial_rng(7, i).random() for i in reversed(range(5))][::-1]
    assert a == b
    assert len(set(a)) == 5


def test_partial_trace_and_swap(rng):
    x = random_hermitian(3, rng)
    y = random_hermitian(3, rng)
    j = np.kron(x, y)
    np.testing.assert_allclose(la.partial_trace(j, keep=0), x * np.trace(y))
    np.testing.assert_allclose(la.partial_trace(j, keep=1), y * np.trace(x))
    f = la.swap_operator(3)
    np.testing.assert_allclose(f @ j @ f, np.kron(y, x), atol=1e-14)
