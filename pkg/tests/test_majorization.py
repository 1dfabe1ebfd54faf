import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from majorize import linalg as la
from majorize import majorization as mj
from majorize.errors import LengthMismatch, NonSquare, NotBistochastic, NotMajorized

from conftest import random_hermitian

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(2, 6)


def brute_force_majorized(u, v, tol=1e-9):
    """Definition unrolled with Python loops, no numpy sorting tricks."""
    a = sorted(u, reverse=True)
    b = sorted(v, reverse=True)
    sa = sb = 0.0
    for x, y in zip(a, b):
        sa += x
        sb += y
        if sa > sb + tol:
            return False
    return abs(sa - sb) <= tol


# -------------------------------------------------------------- predicates


@given(v=st.lists(st.floats(-100, 100), min_size=1, max_size=8))
def test_reflexive(v):
    assert mj.majorizes_vec(v, v)


def test_uniform_is_minimal():
    assert mj.majorizes_vec([0.5, 0.5], [1, 0])
    assert not mj.majorizes_vec([1, 0], [0.5, 0.5])


def test_three_vector_example():
    # prefix sums 0.5 <= 0.6, 0.8 <= 0.9, 1.0 == 1.0
    assert mj.majorizes_vec([0.5, 0.3, 0.2], [0.6, 0.3, 0.1])
    assert brute_force_majorized([0.5, 0.3, 0.2], [0.6, 0.3, 0.1])


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        mj.majorizes_vec([1, 0], [1, 0, 0])


@given(n=dims, seed=seeds)
def test_predicate_matches_brute_force(n, seed):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n)
    u = rng.permutation(v) * rng.uniform(0.5, 1.5)
    u += (v.sum() - u.sum()) / n
    assert mj.majorizes_vec(u, v) == brute_force_majorized(u, v)


@given(n=dims, seed=seeds)
def test_transitive(n, seed):
    rng = la.make_rng(seed)
    w = rng.standard_normal(n)
    v = mj.random_bistochastic(n, rng) @ w
    u = mj.random_bistochastic(n, rng) @ v
    assert mj.majorizes_vec(u, v) and mj.majorizes_vec(v, w)
    assert mj.majorizes_vec(u, w)


@given(n=dims, seed=seeds)
def test_bistochastic_image_is_majorized(n, seed):
    rng = la.make_rng(seed)
    d = mj.random_bistochastic(n, rng)
    v = rng.standard_normal(n)
    assert mj.is_bistochastic(d)
    assert mj.majorizes_vec(d @ v, v)


# -------------------------------------------------------------- HLP witness


def test_hlp_identity():
    v = np.array([0.6, 0.3, 0.1])
    np.testing.assert_allclose(mj.hlp_witness(v, v), np.eye(3))


def test_hlp_single_t_transform():
    b = mj.hlp_witness([0.5, 0.5], [1, 0])
    np.testing.assert_allclose(b, [[0.5, 0.5], [0.5, 0.5]])
    assert mj.t_transform_chain([0.5, 0.5], [1, 0]) == [(0, 1, 0.5)]


def test_hlp_not_majorized():
    with pytest.raises(NotMajorized):
        mj.hlp_witness([1, 0], [0.5, 0.5])


@given(n=dims, seed=seeds)
def test_hlp_soundness(n, seed):
    u, v = mj.random_majorized_pair(n, seed)
    b = mj.hlp_witness(u, v)
    assert mj.is_bistochastic(b)
    assert np.max(np.abs(b @ v - u)) <= 1e-9
    assert len(mj.t_transform_chain(u, v)) <= n - 1


def test_hlp_unsorted_inputs():
    u = np.array([0.2, 0.5, 0.3])
    v = np.array([0.1, 0.3, 0.6])
    b = mj.hlp_witness(u, v)
    np.testing.assert_allclose(b @ v, u, atol=1e-15)
    assert mj.is_bistochastic(b)


# -------------------------------------------------------------- Birkhoff


def test_is_bistochastic_examples():
    for perm in itertools.permutations(range(4)):
        assert mj.is_bistochastic(mj.Permutation(perm).matrix())
    assert mj.is_bistochastic([[0.5, 0.5], [0.5, 0.5]])
    assert not mj.is_bistochastic([[1.1, -0.1], [-0.1, 1.1]])
    with pytest.raises(NonSquare):
        mj.is_bistochastic(np.ones((2, 3)))


def test_permutation_matrix_convention():
    p = mj.Permutation((2, 0, 1))
    x = np.array([10.0, 20.0, 30.0])
    y = p.matrix() @ x
    assert y[2] == 10 and y[0] == 20 and y[1] == 30
    np.testing.assert_array_equal(p.inverse().matrix(), p.matrix().T)


def test_birkhoff_identity():
    d = mj.birkhoff_decompose(np.eye(3))
    assert len(d.terms) == 1
    assert d.terms[0][0] == 1.0 and d.terms[0][1] == mj.Permutation.identity(3)


def _as_dict(decomp):
    return {p.image: w for w, p in decomp.terms}


def test_birkhoff_flat_2x2():
    # S_2 has two elements; 0.5 each is the only solution
    got = _as_dict(mj.birkhoff_decompose(np.full((2, 2), 0.5)))
    assert got.keys() == {(0, 1), (1, 0)}
    np.testing.assert_allclose(list(got.values()), [0.5, 0.5])


def test_birkhoff_circulant():
    c = np.array([[0.5, 0.3, 0.2], [0.2, 0.5, 0.3], [0.3, 0.2, 0.5]])
    got = _as_dict(mj.birkhoff_decompose(c))
    # weights solved directly on the three cyclic shifts
    shifts = {tuple(np.argmax(np.roll(np.eye(3), s, axis=0), axis=0)): s for s in range(3)}
    oracle = np.linalg.solve(
        np.stack([np.roll(np.eye(3), s, axis=0)[:, 0] for s in range(3)], 1), c[:, 0]
    )
    assert got.keys() == shifts.keys()
    for image, s in shifts.items():
        assert got[image] == pytest.approx(oracle[s], abs=1e-12)
    assert sorted(got.values()) == pytest.approx([0.2, 0.3, 0.5])


def test_birkhoff_rejects_non_bistochastic():
    with pytest.raises(NotBistochastic):
        mj.birkhoff_decompose([[0.9, 0.2], [0.1, 0.8]])


@given(n=st.integers(2, 8), seed=seeds)
def test_birkhoff_reconstruction_and_term_bound(n, seed):
    d = mj.random_bistochastic(n, seed)
    decomp = mj.birkhoff_decompose(d)
    assert la.max_abs(decomp.reconstruct() - d) <= 1e-9
    assert abs(decomp.weights.sum() - 1) <= 1e-9
    assert np.all(decomp.weights > 0) and np.all(decomp.weights <= 1)
    assert len(decomp.terms) <= (n - 1) ** 2 + 1


@given(n=st.integers(2, 6), seed=seeds)
def test_birkhoff_of_hlp_witness(n, seed):
    u, v = mj.random_majorized_pair(n, seed)
    b = mj.hlp_witness(u, v)
    decomp = mj.birkhoff_decompose(b)
    assert la.max_abs(decomp.reconstruct() - b) <= 1e-9
    assert len(decomp.terms) <= (n - 1) ** 2 + 1


def test_perfect_matching_none():
    support = np.array([[1, 1, 0], [1, 1, 0], [1, 1, 0]], dtype=bool)
    assert mj.perfect_matching(support) is None


# -------------------------------------------------------------- Ando forms


def test_classify_identity():
    cls = mj.classify_vector_map(np.eye(3))
    assert isinstance(cls, mj.ScaledPermutation)
    assert cls.alpha == pytest.approx(1) and cls.beta == pytest.approx(0)
    assert cls.perm == mj.Permutation.identity(3)


def test_classify_trace_form():
    a = np.array([0.2, -1.0, 3.0])
    cls = mj.classify_vector_map(np.outer(a, np.ones(3)))
    assert isinstance(cls, mj.TraceForm)
    np.testing.assert_allclose(cls.a, a)


def test_classify_other_with_counterexample():
    t = np.diag([1.0, 1.0, 2.0])
    cls = mj.classify_vector_map(t)
    assert isinstance(cls, mj.OtherMap)
    u, v = cls.counterexample
    assert brute_force_majorized(u, v)
    assert not brute_force_majorized(t @ u, t @ v)


def test_classify_non_square():
    with pytest.raises(NonSquare):
        mj.classify_vector_map(np.ones((2, 3)))


@given(n=st.integers(2, 6), seed=seeds, negative=st.booleans())
def test_scaled_permutation_detected_and_preserving(n, seed, negative):
    rng = la.make_rng(seed)
    alpha = rng.uniform(0.1, 3) * (-1 if negative else 1)
    beta = rng.uniform(-2, 2)
    perm = mj.Permutation(tuple(rng.permutation(n)))
    t = alpha * perm.matrix() + beta * np.ones((n, n))
    cls = mj.classify_vector_map(t)
    assert isinstance(cls, mj.ScaledPermutation)
    assert la.max_abs(cls.matrix() - t) <= 1e-9
    for _ in range(50):
        u, v = mj.random_majorized_pair(n, rng)
        assert mj.majorizes_vec(t @ u, t @ v)


@given(n=st.integers(2, 6), seed=seeds)
def test_trace_form_preserving(n, seed):
    rng = la.make_rng(seed)
    t = np.outer(rng.standard_normal(n), np.ones(n))
    cls = mj.classify_vector_map(t)
    assert isinstance(cls, mj.TraceForm)
    assert la.max_abs(cls.matrix() - t) <= 1e-9
    for _ in range(50):
        u, v = mj.random_majorized_pair(n, rng)
        assert mj.majorizes_vec(t @ u, t @ v)


def test_ando_forms_thousand_pairs():
    rng = la.make_rng(11)
    maps = [
        mj.ScaledPermutation(-0.7, 0.4, mj.Permutation((1, 3, 0, 2))).matrix(),
        mj.TraceForm(np.array([1.0, -2.0, 0.5, 0.0])).matrix(),
    ]
    for t in maps:
        assert not isinstance(mj.classify_vector_map(t), mj.OtherMap)
        for _ in range(1000):
            u, v = mj.random_majorized_pair(4, rng)
            assert mj.majorizes_vec(t @ u, t @ v)


# -------------------------------------------------------------- operators


def test_majorizes_op_examples(rng):
    b = la.random_density(3, seed=4)
    assert mj.majorizes_op(np.eye(3) / 3, b)
    u = la.random_haar_unitary(3, 8)
    a = u @ b @ u.conj().T
    assert mj.majorizes_op(a, b) and mj.majorizes_op(b, a)
    assert mj.majorizes_op(np.diag([0.6, 0.4]), np.diag([0.9, 0.1]))
    assert not mj.majorizes_op(np.diag([0.9, 0.1]), np.diag([0.6, 0.4]))


def test_witness_diagonal_equal():
    b = np.diag([0.7, 0.2, 0.1])
    w = mj.mixed_unitary_witness(b, b)
    assert len(w.terms) == 1
    assert w.terms[0][0] == pytest.approx(1)
    np.testing.assert_allclose(w.terms[0][1], np.eye(3), atol=1e-14)


def test_witness_maximally_mixed_qubit():
    w = mj.mixed_unitary_witness(np.eye(2) / 2, np.diag([1.0, 0.0]))
    x = np.array([[0, 1], [1, 0]])
    got = sorted(((p, np.round(u.real, 12).tolist()) for p, u in w.terms), key=lambda t: t[1])
    assert [p for p, _ in got] == pytest.approx([0.5, 0.5])
    assert [u for _, u in got] == sorted([x.tolist(), np.eye(2).tolist()])


def test_witness_not_majorized():
    with pytest.raises(NotMajorized):
        mj.mixed_unitary_witness(np.diag([1.0, 0.0]), np.eye(2) / 2)


@given(n=st.integers(2, 6), seed=seeds)
def test_witness_reconstructs(n, seed):
    rng = la.make_rng(seed)
    b = random_hermitian(n, rng)
    d = mj.random_bistochastic(n, rng)
    a_spec = d @ la.spectrum(b)
    v = la.random_haar_unitary(n, rng)
    a = (v * a_spec) @ v.conj().T
    a = (a + a.conj().T) / 2
    w = mj.mixed_unitary_witness(a, b)
    ps = np.array([p for p, _ in w.terms])
    assert np.all(ps >= 0) and abs(ps.sum() - 1) <= 1e-9
    for _, u in w.terms:
        assert la.is_unitary(u)
    assert la.max_abs(w.apply(b) - a) <= 1e-8


@given(n=st.integers(2, 5), seed=seeds)
def test_op_predicate_agrees_with_witness(n, seed):
    rng = la.make_rng(seed)
    a = random_hermitian(n, rng)
    b = random_hermitian(n, rng)
    a = a - (np.trace(a) - np.trace(b)) / n * np.eye(n)
    if mj.majorizes_op(a, b):
        assert la.max_abs(mj.mixed_unitary_witness(a, b).apply(b) - a) <= 1e-8
    else:
        with pytest.raises(NotMajorized):
            mj.mixed_unitary_witness(a, b)
