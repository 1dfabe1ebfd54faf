"""Majorization of real vectors and Hermitian operators, with witnesses.

Every positive answer can be backed by a certificate: a bistochastic matrix
built from T-transforms (vectors), its Birkhoff decomposition into
permutations, and a mixed-unitary channel (operators).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT
from .errors import (
    DimensionMismatch,
    LengthMismatch,
    NoPerfectMatching,
    NonSquare,
    NotBistochastic,
    NotMajorized,
)
from .linalg import SeedLike, as_hermitian, hermitian_eig, make_rng


# --------------------------------------------------------------------------
# types
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., n-1}`` with ``image[j] == pi(j)``.

    Its matrix has ``P[i, j] == 1`` iff ``i == pi(j)``, so ``(P x)[pi(j)] == x[j]``.
    """

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(i) for i in self.image)
        if sorted(image) != list(range(len(image))):
            raise ValueError(f"{image} is not a permutation")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.image)

    def matrix(self) -> np.ndarray:
        p = np.zeros((self.n, self.n))
        p[list(self.image), list(range(self.n))] = 1.0
        return p

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for j, i in enumerate(self.image):
            inv[i] = j
        return Permutation(tuple(inv))


@dataclass(frozen=True, eq=False)
class BirkhoffDecomposition:
    terms: Tuple[Tuple[float, Permutation], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.terms])

    def reconstruct(self) -> np.ndarray:
        n = self.terms[0][1].n
        out = np.zeros((n, n))
        for w, p in self.terms:
            out += w * p.matrix()
        return out


@dataclass(frozen=True, eq=False)
class TraceForm:
    """``T u = Tr(u) a``."""

    a: np.ndarray

    def matrix(self) -> np.ndarray:
        n = len(self.a)
        return np.outer(self.a, np.ones(n))


@dataclass(frozen=True, eq=False)
class ScaledPermutation:
    """``T u = alpha P u + beta Tr(u) e``."""

    alpha: float
    beta: float
    perm: Permutation

    def matrix(self) -> np.ndarray:
        n = self.perm.n
        return self.alpha * self.perm.matrix() + self.beta * np.ones((n, n))


@dataclass(frozen=True, eq=False)
class OtherMap:
    """Neither form; ``counterexample`` is a pair ``(u, v)`` with ``u < v`` but
    ``Tu`` not majorized by ``Tv``, if the search found one."""

    counterexample: Optional[Tuple[np.ndarray, np.ndarray]] = None


VectorMapClass = Union[TraceForm, ScaledPermutation, OtherMap]


@dataclass(frozen=True, eq=False)
class MixedUnitaryWitness:
    terms: Tuple[Tuple[float, np.ndarray], ...] = field(default_factory=tuple)

    def apply(self, b: np.ndarray) -> np.ndarray:
        out = np.zeros_like(np.asarray(b, dtype=np.complex128))
        for w, u in self.terms:
            out += w * (u @ b @ u.conj().T)
        return out


# --------------------------------------------------------------------------
# vector majorization
# --------------------------------------------------------------------------


def _as_vector(u) -> np.ndarray:
    v = np.asarray(u, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise LengthMismatch(f"expected a nonempty vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def decreasing(u) -> np.ndarray:
    return np.sort(np.asarray(u, dtype=float))[::-1]


def majorization_gaps(u, v) -> np.ndarray:
    """Prefix sums of ``u`` minus those of ``v``, both sorted decreasingly.

    ``u < v`` exactly when all entries are ``<= 0`` and the last is 0.
    """
    u, v = _as_vector(u), _as_vector(v)
    if u.shape != v.shape:
        raise LengthMismatch(f"lengths {u.size} and {v.size} differ")
    return np.cumsum(decreasing(u)) - np.cumsum(decreasing(v))


def majorizes_vec(u, v, tol: float = DEFAULT.majorization) -> bool:
    """Whether ``u`` is majorized by ``v`` (``u < v``)."""
    gaps = majorization_gaps(u, v)
    total_tol = tol * max(1.0, abs(float(np.sum(v))))
    return bool(np.all(gaps[:-1] <= tol) and abs(gaps[-1]) <= total_tol)


def t_transform_chain(u, v, tol: float = DEFAULT.majorization) -> List[Tuple[int, int, float]]:
    """T-transforms carrying ``v`` sorted down to ``u`` sorted down.

    Returns steps ``(j, k, t)`` meaning ``y <- (t I + (1 - t) Q_jk) y`` on the
    sorted coordinates, in application order; at most ``n - 1`` steps.
    """
    if not majorizes_vec(u, v, tol):
        raise NotMajorized("u is not majorized by v")
    x = decreasing(u)
    y = decreasing(v)
    n = x.size
    eps = 1e-14 * max(1.0, float(np.max(np.abs(y))))
    steps: List[Tuple[int, int, float]] = []
    for _ in range(n - 1):
        above = np.nonzero(y - x > eps)[0]
        if above.size == 0:
            break
        j = int(above[-1])
        below = np.nonzero(x[j + 1:] - y[j + 1:] > eps)[0]
        if below.size == 0:
            break
        k = j + 1 + int(below[0])
        delta = min(y[j] - x[j], x[k] - y[k])
        t = 1.0 - delta / (y[j] - y[k])
        yj, yk = y[j], y[k]
        y[j] = t * yj + (1.0 - t) * yk
        y[k] = t * yk + (1.0 - t) * yj
        steps.append((j, k, t))
    return steps


def hlp_witness(u, v, tol: float = DEFAULT.majorization) -> np.ndarray:
    """A bistochastic ``B`` with ``B v == u``.

    Raises:
        NotMajorized: if ``u`` is not majorized by ``v``.
    """
    u, v = _as_vector(u), _as_vector(v)
    steps = t_transform_chain(u, v, tol)
    n = u.size
    b = np.eye(n)
    for j, k, t in steps:
        tt = np.eye(n)
        tt[[j, k], [j, k]] = t
        tt[j, k] = tt[k, j] = 1.0 - t
        b = tt @ b
    # b maps v sorted to u sorted; undo both sorts
    order_u = np.argsort(-u, kind="stable")
    order_v = np.argsort(-v, kind="stable")
    out = np.zeros((n, n))
    out[np.ix_(order_u, order_v)] = b
    return out


def is_bistochastic(b, tol: float = DEFAULT.bistochastic) -> bool:
    m = np.asarray(b, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return bool(
        np.all(m >= -tol)
        and np.all(np.abs(m.sum(axis=0) - 1.0) <= tol)
        and np.all(np.abs(m.sum(axis=1) - 1.0) <= tol)
    )


def random_bistochastic(
    n: int, seed: SeedLike = 0, max_terms: Optional[int] = None
) -> np.ndarray:
    """Convex combination of ``k`` random permutation matrices.

    ``k`` is uniform on ``1..max_terms`` (default ``n**2``) and the weights are
    uniform on the simplex.
    """
    rng = make_rng(seed)
    max_terms = n * n if max_terms is None else max_terms
    k = int(rng.integers(1, max_terms + 1))
    weights = rng.dirichlet(np.ones(k))
    d = np.zeros((n, n))
    for w in weights:
        d[rng.permutation(n), np.arange(n)] += w
    return d


def random_majorized_pair(n: int, seed: SeedLike = 0) -> Tuple[np.ndarray, np.ndarray]:
    """``(u, v)`` with ``u = D v`` for random Gaussian ``v`` and bistochastic ``D``."""
    rng = make_rng(seed)
    v = rng.standard_normal(n)
    return random_bistochastic(n, rng) @ v, v


# --------------------------------------------------------------------------
# Birkhoff decomposition
# --------------------------------------------------------------------------


def perfect_matching(support: np.ndarray) -> Optional[List[int]]:
    """Row matched to each column of a boolean support matrix, or ``None``.

    Kuhn's augmenting-path algorithm.
    """
    n = support.shape[0]
    row_of_col = [-1] * n
    col_of_row = [-1] * n

    def augment(j: int, seen: List[bool]) -> bool:
        for i in np.nonzero(support[:, j])[0]:
            if seen[i]:
                continue
            seen[i] = True
            if col_of_row[i] < 0 or augment(col_of_row[i], seen):
                col_of_row[i] = j
                row_of_col[j] = int(i)
                return True
        return False

    for j in range(n):
        if not augment(j, [False] * n):
            return None
    return row_of_col


def bottleneck_matching(m: np.ndarray, tol: float) -> Optional[List[int]]:
    """Perfect matching on entries ``> tol`` that maximizes the smallest matched entry.

    Binary search over the distinct entry values, one augmenting-path
    matching per probe.
    """
    values = np.unique(m[m > tol])
    best = None
    lo, hi = 0, values.size - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        match = perfect_matching(m >= values[mid])
        if match is None:
            hi = mid - 1
        else:
            best = match
            lo = mid + 1
    return best


def birkhoff_decompose(b, tol: float = DEFAULT.birkhoff) -> BirkhoffDecomposition:
    """Greedy Birkhoff-von Neumann decomposition.

    Repeatedly finds a perfect matching on the support (entries above
    ``tol``) whose smallest entry is as large as possible, and peels off the
    matched permutation with that entry as its weight. Each peel moves the residual to a strictly smaller face of the
    Birkhoff polytope, so there are at most ``(n-1)^2 + 1`` terms.

    Raises:
        NotBistochastic: input fails :func:`is_bistochastic`.
        NoPerfectMatching: the residual lost its perfect matching, which
            means ``tol`` is too tight for the input's rounding noise.
    """
    m = np.array(b, dtype=float)
    if not is_bistochastic(m, max(tol, DEFAULT.bistochastic)):
        raise NotBistochastic("input is not bistochastic")
    n = m.shape[0]
    residual = np.where(m > tol, m, 0.0)
    terms: List[Tuple[float, Permutation]] = []
    remaining = 1.0
    while residual.sum() > n * tol:
        if len(terms) > (n - 1) ** 2:
            raise NoPerfectMatching("term budget (n-1)^2 + 1 exhausted")
        match = bottleneck_matching(residual, tol)
        if match is None:
            raise NoPerfectMatching(
                f"no perfect matching with {remaining:.3g} weight left to extract"
            )
        cols = np.arange(n)
        w = float(np.min(residual[match, cols]))
        residual[match, cols] -= w
        residual[residual <= tol] = 0.0
        remaining -= w
        terms.append((w, Permutation(tuple(match))))
    return BirkhoffDecomposition(tuple(terms))


# --------------------------------------------------------------------------
# linear maps on R^n
# --------------------------------------------------------------------------


def find_vector_counterexample(
    t, trials: int = 1000, seed: SeedLike = 0, tol: float = DEFAULT.majorization
) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Random search for ``u < v`` with ``T u`` not majorized by ``T v``."""
    t = np.asarray(t, dtype=float)
    rng = make_rng(seed)
    n = t.shape[0]
    for _ in range(trials):
        u, v = random_majorized_pair(n, rng)
        if not majorizes_vec(t @ u, t @ v, tol):
            return u, v
    return None


def classify_vector_map(
    t, tol: float = 1e-9, search_trials: int = 1000, seed: SeedLike = 0
) -> VectorMapClass:
    """Match ``T`` against the two majorization-preserving forms on ``R^n``.

    Tries ``T u = Tr(u) a`` (all columns equal) first, then
    ``T = alpha P + beta E`` (each column is ``beta`` plus a single
    ``alpha`` spike, spikes forming a permutation). For anything else a
    random counterexample search is run and its result attached.
    """
    m = np.asarray(t, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    n = m.shape[0]
    if n < 2:
        raise DimensionMismatch("n must be at least 2")

    a = m.mean(axis=1)
    if np.max(np.abs(m - a[:, None])) <= tol:
        return TraceForm(a)

    for sign in (1.0, -1.0):
        spikes = np.argmax(sign * m, axis=0)
        cols = np.arange(n)
        if len(set(spikes.tolist())) != n:
            continue
        mask = np.ones_like(m, dtype=bool)
        mask[spikes, cols] = False
        beta = float(m[mask].mean())
        alpha = float(np.mean(m[spikes, cols])) - beta
        cand = ScaledPermutation(alpha, beta, Permutation(tuple(spikes.tolist())))
        if np.max(np.abs(cand.matrix() - m)) <= tol:
            return cand

    return OtherMap(find_vector_counterexample(m, search_trials, seed))


# --------------------------------------------------------------------------
# operator majorization
# --------------------------------------------------------------------------


def _pair_spectra(a, b):
    a = as_hermitian(a)
    b = as_hermitian(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return hermitian_eig(a), hermitian_eig(b)


def majorizes_op(a, b, tol: float = DEFAULT.majorization) -> bool:
    """Whether Hermitian ``A`` is majorized by ``B``, i.e. ``lambda(A) < lambda(B)``."""
    ea, eb = _pair_spectra(a, b)
    return majorizes_vec(ea.eigenvalues, eb.eigenvalues, tol)


def mixed_unitary_witness(
    a, b, tol: float = DEFAULT.majorization
) -> MixedUnitaryWitness:
    """Weights and unitaries with ``sum_k p_k U_k B U_k^dagger == A``.

    With ``A = V diag(a) V^dagger`` and ``B = W diag(b) W^dagger``, the
    bistochastic ``D`` taking ``b`` to ``a`` decomposes as ``sum_k w_k P_k``,
    and ``U_k = V P_k W^dagger``.

    Raises:
        NotMajorized: if ``A`` is not majorized by ``B``.
    """
    ea, eb = _pair_spectra(a, b)
    if not majorizes_vec(ea.eigenvalues, eb.eigenvalues, tol):
        raise NotMajorized("A is not majorized by B")
    d = hlp_witness(ea.eigenvalues, eb.eigenvalues, tol)
    decomposition = birkhoff_decompose(d)
    v, w = ea.eigenvectors, eb.eigenvectors
    terms = tuple(
        (weight, v @ perm.matrix() @ w.conj().T) for weight, perm in decomposition.terms
    )
    return MixedUnitaryWitness(terms)
