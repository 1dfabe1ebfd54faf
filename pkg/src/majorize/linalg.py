"""Dense complex linear algebra for small matrices (n <= 16).

Matrices are plain ``numpy`` arrays. Validation helpers raise the errors
from :mod:`majorize.errors`; everything else is a pure function of its
inputs.

Basis convention: ``|ij> = e_i (x) e_j`` and ``vectorize(K)[i*n + j] ==
K[i, j]``, so ``|K>> = (K (x) 1)|1>>`` with ``|1>> = sum_j |jj>``.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence, Union

import numba
import numpy as np

from .config import DEFAULT
from .errors import (
    BadSpectrum,
    DimensionMismatch,
    InvalidState,
    NoConvergence,
    NonHermitian,
    NonSquare,
    NotUnitary,
)

SeedLike = Union[int, np.random.Generator]


class EigenDecomposition(NamedTuple):
    """Eigenvalues sorted descending and matching unit eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


# --------------------------------------------------------------------------
# validation
# --------------------------------------------------------------------------


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NonSquare(f"expected a matrix, got array of shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InvalidState("matrix has non-finite entries")
    return m


def as_square(a) -> np.ndarray:
    m = as_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def hermiticity_error(a) -> float:
    m = np.asarray(a)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def as_hermitian(a, tol: float = DEFAULT.hermiticity) -> np.ndarray:
    """Validate Hermiticity and return the exactly symmetrized matrix."""
    m = as_square(a)
    err = hermiticity_error(m)
    if err > tol:
        raise NonHermitian(f"||A - A^dagger||_max = {err:.3g} exceeds {tol:g}")
    return 0.5 * (m + m.conj().T)


def as_density(rho, tol: float = DEFAULT.density_eig) -> np.ndarray:
    """Validate a density matrix: Hermitian, PSD within ``tol``, unit trace."""
    try:
        m = as_hermitian(rho)
    except NonHermitian as exc:
        raise InvalidState(str(exc)) from exc
    tr = np.trace(m).real
    if abs(tr - 1.0) > DEFAULT.density_trace:
        raise InvalidState(f"trace {tr!r} differs from 1")
    lo = hermitian_eig(m).eigenvalues[-1]
    if lo < -tol:
        raise InvalidState(f"smallest eigenvalue {lo:.3g} is negative")
    return m


def is_unitary(u, tol: float = DEFAULT.unitarity) -> bool:
    m = np.asarray(u, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))) <= tol


def as_unitary(u, tol: float = DEFAULT.unitarity) -> np.ndarray:
    m = as_square(u)
    if not is_unitary(m, tol):
        raise NotUnitary("matrix is not unitary")
    return m


# --------------------------------------------------------------------------
# eigensolver
# --------------------------------------------------------------------------


@numba.njit(cache=True)
def _jacobi_sweeps(a, tol_rel, max_sweeps):
    # Cyclic complex Jacobi. Works in place on ``a``; returns (a, v, sweeps),
    # sweeps = -1 when the cap is hit.
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    fro = 0.0
    for i in range(n):
        for j in range(n):
            fro += abs(a[i, j]) ** 2
    fro = math.sqrt(fro)
    for sweep in range(max_sweeps + 1):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += abs(a[i, j]) ** 2
        if math.sqrt(off) <= tol_rel * fro:
            return a, v, sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                gpp = c + 0j
                gpq = s + 0j
                gqp = -s * np.conj(phase)
                gqq = c * np.conj(phase)
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * gpp + akq * gqp
                    a[k, q] = akp * gpq + akq * gqq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = np.conj(gpp) * apk + np.conj(gqp) * aqk
                    a[q, k] = np.conj(gpq) * apk + np.conj(gqq) * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                for k in range(n):
                    vkp = v[k, p]
                    vkq = v[k, q]
                    v[k, p] = vkp * gpp + vkq * gqp
                    v[k, q] = vkp * gpq + vkq * gqq
    return a, v, -1


def hermitian_eig(
    a,
    *,
    tol: float = DEFAULT.hermiticity,
    rel_tol: float = DEFAULT.jacobi_rel,
    max_sweeps: int = DEFAULT.jacobi_sweeps,
) -> EigenDecomposition:
    """Diagonalize a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues come back in descending order, ties kept in their original
    diagonal order. Each eigenvector is scaled so that its largest-magnitude
    component is real and positive.

    Raises:
        NonHermitian: if ``||A - A^dagger||_max > tol``.
        NoConvergence: if the off-diagonal mass is still above
            ``rel_tol * ||A||_F`` after ``max_sweeps`` sweeps.
    """
    m = as_hermitian(a, tol)
    d, v, sweeps = _jacobi_sweeps(np.array(m, dtype=np.complex128), rel_tol, max_sweeps)
    if sweeps < 0:
        raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")
    w = np.diag(d).real.copy()
    order = np.argsort(-w, kind="stable")
    w = w[order]
    v = v[:, order]
    idx = np.argmax(np.abs(v), axis=0)
    cols = np.arange(v.shape[1])
    pivots = v[idx, cols]
    v = v * (np.abs(pivots) / pivots)
    v[idx, cols] = np.abs(pivots)
    return EigenDecomposition(w, v)


def spectrum(a) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, descending."""
    return hermitian_eig(a).eigenvalues


def is_psd(a, tol: float = DEFAULT.cp) -> bool:
    return bool(spectrum(a)[-1] >= -tol)


# --------------------------------------------------------------------------
# random sampling
# --------------------------------------------------------------------------


def make_rng(seed: SeedLike) -> np.random.Generator:
    """PCG64 generator for ``seed``; generators pass through unchanged."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def trial_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for trial ``index`` under master ``seed``.

    The stream is the ``index``-th spawned child of ``SeedSequence(seed)``, so
    it depends only on the pair and trials can run in any order.
    """
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(index),))
    return np.random.Generator(np.random.PCG64(ss))


def random_haar_unitary(n: int, seed: SeedLike = 0) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix, with the columns of Q rephased so that
    R has a positive real diagonal.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def sample_simplex(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform point on the probability simplex via sorted-uniform spacings."""
    cuts = np.sort(rng.random(n - 1))
    return np.diff(np.concatenate(([0.0], cuts, [1.0])))


def random_density(
    n: int, spectrum: Optional[Sequence[float]] = None, seed: SeedLike = 0
) -> np.ndarray:
    """``U diag(p) U^dagger`` for Haar ``U``.

    ``p`` defaults to a uniform simplex sample drawn from the same stream
    before ``U``.
    """
    rng = make_rng(seed)
    if spectrum is None:
        p = sample_simplex(n, rng)
    else:
        p = np.asarray(spectrum, dtype=float)
        if p.shape != (n,):
            raise BadSpectrum(f"spectrum must have length {n}")
        if np.any(p < 0) or abs(p.sum() - 1.0) > DEFAULT.density_trace:
            raise BadSpectrum("spectrum must be nonnegative and sum to 1")
    u = random_haar_unitary(n, rng)
    rho = (u * p) @ u.conj().T
    return 0.5 * (rho + rho.conj().T)


# --------------------------------------------------------------------------
# vectorization and bipartite helpers
# --------------------------------------------------------------------------


def vectorize(k) -> np.ndarray:
    m = as_square(k)
    return m.reshape(-1).copy()


def devectorize(vec) -> np.ndarray:
    v = np.asarray(vec, dtype=np.complex128).reshape(-1)
    n = math.isqrt(v.size)
    if n * n != v.size:
        raise NonSquare(f"vector of length {v.size} is not a vectorized square matrix")
    return v.reshape(n, n).copy()


def bipartite_dim(j) -> int:
    """``n`` for an ``n^2 x n^2`` operator on ``C^n (x) C^n``."""
    m = np.asarray(j)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    n = math.isqrt(m.shape[0])
    if n * n != m.shape[0]:
        raise DimensionMismatch(f"size {m.shape[0]} is not a perfect square")
    return n


def partial_trace(j, keep: int) -> np.ndarray:
    """Trace out one tensor factor; ``keep`` is 0 (first) or 1 (second)."""
    n = bipartite_dim(j)
    t = np.asarray(j).reshape(n, n, n, n)
    if keep == 0:
        return np.einsum("iaja->ij", t)
    return np.einsum("iaib->ab", t)


def partial_transpose_second(j) -> np.ndarray:
    n = bipartite_dim(j)
    t = np.asarray(j).reshape(n, n, n, n)
    return t.transpose(0, 3, 2, 1).reshape(n * n, n * n)


def swap_operator(n: int) -> np.ndarray:
    """``F |ab> = |ba>`` on ``C^n (x) C^n``."""
    f = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            f[b * n + a, a * n + b] = 1.0
    return f


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def dagger(a: np.ndarray) -> np.ndarray:
    return a.conj().T
