"""Quantum channels in Kraus and Choi form.

Constructors for the three families of majorization-preserving channels
(constant, depolarized unitary, depolarized transpose), the closed-form
lambda ranges on which they are completely positive, and a classifier that
recognizes which family a given channel belongs to.

Choi convention: ``J = sum_{ab} Phi(|a><b|) (x) |a><b|``, output factor
first, so ``J = sum_mu |K_mu>> <<K_mu|`` and trace preservation reads
``Tr_1 J = 1``. Transposes are taken in the computational basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from .config import DEFAULT
from .errors import (
    BadDimension,
    DimensionMismatch,
    InvalidState,
    LambdaOutOfRange,
    NonHermitian,
    NotCP,
    NotTP,
)
from .linalg import (
    as_density,
    as_hermitian,
    as_square,
    as_unitary,
    bipartite_dim,
    dagger,
    devectorize,
    hermitian_eig,
    hermiticity_error,
    is_unitary,
    max_abs,
    partial_trace,
    partial_transpose_second,
    swap_operator,
    vectorize,
)


# --------------------------------------------------------------------------
# representations
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """``rho -> sum_mu K_mu rho K_mu^dagger`` with ``sum K^dagger K == 1``."""

    kraus: Tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_square(k) for k in self.kraus)
        if not ops:
            raise DimensionMismatch("a channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        if any(k.shape != (n, n) for k in ops):
            raise DimensionMismatch("Kraus operators must share one square shape")
        object.__setattr__(self, "kraus", ops)
        err = tp_error(ops)
        if err > DEFAULT.kraus_tp:
            raise NotTP(f"||sum K^dagger K - 1||_max = {err:.3g}")

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, x) -> np.ndarray:
        """Action on an arbitrary ``n x n`` operator."""
        x = np.asarray(x, dtype=np.complex128)
        if x.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator shape {x.shape} != ({self.dim}, {self.dim})")
        out = np.zeros_like(x)
        for k in self.kraus:
            out += k @ x @ dagger(k)
        return out

    def adjoint_kraus(self) -> Tuple[np.ndarray, ...]:
        return tuple(dagger(k) for k in self.kraus)


def tp_error(kraus: Sequence[np.ndarray]) -> float:
    n = kraus[0].shape[0]
    s = sum(dagger(k) @ k for k in kraus)
    return max_abs(s - np.eye(n))


def unital_error(channel: KrausChannel) -> float:
    return max_abs(channel(np.eye(channel.dim)) - np.eye(channel.dim))


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    """Hermitian ``n^2 x n^2`` Choi matrix of a trace-preserving map."""

    dim: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.complex128)
        if m.shape != (self.dim**2, self.dim**2):
            raise DimensionMismatch(f"Choi matrix shape {m.shape} does not match dim {self.dim}")
        m = as_hermitian(m, 1e-9)
        object.__setattr__(self, "matrix", m)
        if not is_tp(m, DEFAULT.choi_tp):
            raise NotTP("partial trace over the output factor is not the identity")

    @classmethod
    def from_matrix(cls, matrix) -> "ChoiMatrix":
        return cls(bipartite_dim(matrix), np.asarray(matrix))


def is_tp(j, tol: float = DEFAULT.choi_tp) -> bool:
    n = bipartite_dim(j)
    return max_abs(partial_trace(j, keep=1) - np.eye(n)) <= tol


def apply(channel: KrausChannel, rho) -> np.ndarray:
    """``Phi(rho)`` for a density matrix ``rho``."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (channel.dim, channel.dim):
        raise DimensionMismatch(f"state shape {rho.shape} != channel dim {channel.dim}")
    rho = as_density(rho)
    out = channel(rho)
    return 0.5 * (out + dagger(out))


def choi(channel: KrausChannel) -> ChoiMatrix:
    n = channel.dim
    j = np.zeros((n * n, n * n), dtype=np.complex128)
    for k in channel.kraus:
        v = vectorize(k)
        j += np.outer(v, v.conj())
    return ChoiMatrix(n, j)


def choi_of_map(linear_map: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Choi matrix of any linear map, assembled from its action on ``|a><b|``.

    Returns a raw array since the map need not be CP or even Hermitian
    preserving.
    """
    j = np.zeros((n * n, n * n), dtype=np.complex128)
    for a in range(n):
        for b in range(n):
            e = np.zeros((n, n), dtype=np.complex128)
            e[a, b] = 1.0
            j += np.kron(np.asarray(linear_map(e), dtype=np.complex128), e)
    return j


def apply_choi(j, x) -> np.ndarray:
    """``Tr_2[J (1 (x) x^T)]``, the map encoded by ``J`` applied to ``x``."""
    n = bipartite_dim(j)
    t = np.asarray(j).reshape(n, n, n, n)
    return np.einsum("iajb,ab->ij", t, np.asarray(x))


def min_choi_eigenvalue(j) -> float:
    m = j.matrix if isinstance(j, ChoiMatrix) else j
    return float(hermitian_eig(m, tol=1e-9).eigenvalues[-1])


def is_cp(j, tol: float = DEFAULT.cp) -> bool:
    """Complete positivity: smallest Choi eigenvalue ``>= -tol``."""
    return min_choi_eigenvalue(j) >= -tol


def kraus_from_choi(j, tol: float = DEFAULT.cp) -> KrausChannel:
    """Kraus operators ``sqrt(g) devec(v)`` from the eigenpairs of ``J`` with ``g > tol``.

    Raises:
        NotCP: an eigenvalue is below ``-tol``.
        NotTP: ``Tr_1 J`` differs from the identity.
    """
    m = j.matrix if isinstance(j, ChoiMatrix) else as_hermitian(j, 1e-9)
    if not is_tp(m, DEFAULT.choi_tp):
        raise NotTP("partial trace over the output factor is not the identity")
    eig = hermitian_eig(m, tol=1e-9)
    if eig.eigenvalues[-1] < -tol:
        raise NotCP(f"Choi matrix has eigenvalue {eig.eigenvalues[-1]:.3g}")
    keep = eig.eigenvalues > tol
    ops = tuple(
        np.sqrt(g) * devectorize(eig.eigenvectors[:, i])
        for i, g in zip(np.nonzero(keep)[0], eig.eigenvalues[keep])
    )
    return KrausChannel(ops)


# --------------------------------------------------------------------------
# families and their lambda ranges
# --------------------------------------------------------------------------


class Family(str, enum.Enum):
    UNITARY = "unitary"
    TRANSPOSE = "transpose"


@dataclass(frozen=True)
class LambdaRange:
    kind: Family
    dim: int
    lo_exact: Fraction
    hi_exact: Fraction

    @property
    def lo(self) -> float:
        return float(self.lo_exact)

    @property
    def hi(self) -> float:
        return float(self.hi_exact)

    def contains(self, lam: float, slack: float = DEFAULT.lambda_slack) -> bool:
        return self.lo - slack <= lam <= self.hi + slack


def _choi_positivity_rows(kind: Family, n: int):
    """Eigenvalues of ``J(Psi)`` as affine functions ``c0 + c1 alpha + c2 beta``."""
    if kind is Family.UNITARY:
        # alpha |1>><<1| + beta 1(x)1: |1>> has norm^2 n, the rest is beta
        return [(0, n, 1), (0, 0, 1)]
    # alpha SWAP + beta 1(x)1, SWAP eigenvalues +1 and -1
    return [(0, 1, 1), (0, -1, 1)]


def _solve_interval(kind: Family, n: int) -> Tuple[Fraction, Fraction]:
    # alpha = lam, beta = (1 - lam)/n, so alpha + n beta = 1 holds identically
    lo, hi = Fraction(-10**9), Fraction(10**9)
    for c0, ca, cb in _choi_positivity_rows(kind, n):
        # c0 + ca lam + cb (1 - lam)/n >= 0  ->  const + slope lam >= 0
        const = Fraction(c0) + Fraction(cb, n)
        slope = Fraction(ca) - Fraction(cb, n)
        if slope > 0:
            lo = max(lo, -const / slope)
        elif slope < 0:
            hi = min(hi, -const / slope)
        elif const < 0:
            raise ValueError("empty range")
    return lo, hi


def lambda_range(kind: Union[Family, str], n: int) -> LambdaRange:
    """Closed interval of ``lambda`` on which the family is CP at dimension ``n``.

    Unitary: ``[-1/(n^2-1), 1]``; transpose: ``[-1/(n-1), 1/(n+1)]``.
    """
    kind = Family(kind)
    if int(n) != n or n < 2:
        raise BadDimension(f"dimension must be an integer >= 2, got {n}")
    lo, hi = _solve_interval(kind, int(n))
    return LambdaRange(kind, int(n), lo, hi)


def depolarized_unitary_choi(lam: float, u) -> np.ndarray:
    """``lam |U>><<U| + (1-lam)/n 1(x)1`` with no range check."""
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0]
    v = vectorize(u)
    return lam * np.outer(v, v.conj()) + (1.0 - lam) / n * np.eye(n * n)


def depolarized_transpose_choi(lam: float, u) -> np.ndarray:
    """``lam (U(x)1) SWAP (U(x)1)^dagger + (1-lam)/n 1(x)1`` with no range check."""
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0]
    ul = np.kron(u, np.eye(n))
    return lam * (ul @ swap_operator(n) @ dagger(ul)) + (1.0 - lam) / n * np.eye(n * n)


def _check_lambda(kind: Family, lam: float, n: int) -> None:
    r = lambda_range(kind, n)
    if not r.contains(lam):
        raise LambdaOutOfRange(
            f"lambda = {lam} outside [{r.lo_exact}, {r.hi_exact}] for the {kind.value} family at n = {n}"
        )


def depolarized_unitary(lam: float, u) -> KrausChannel:
    """``rho -> lam U rho U^dagger + (1 - lam) 1/n``."""
    u = as_unitary(u)
    _check_lambda(Family.UNITARY, lam, u.shape[0])
    return kraus_from_choi(depolarized_unitary_choi(lam, u))


def depolarized_transpose(lam: float, u) -> KrausChannel:
    """``rho -> lam U rho^T U^dagger + (1 - lam) 1/n``."""
    u = as_unitary(u)
    _check_lambda(Family.TRANSPOSE, lam, u.shape[0])
    return kraus_from_choi(depolarized_transpose_choi(lam, u))


def constant_channel(omega) -> KrausChannel:
    """``rho -> omega`` for every state, from the Choi matrix ``omega (x) 1``."""
    try:
        omega = as_density(omega)
    except (NonHermitian, DimensionMismatch) as exc:
        raise InvalidState(str(exc)) from exc
    n = omega.shape[0]
    return kraus_from_choi(np.kron(omega, np.eye(n)))


def completely_depolarizing(n: int) -> KrausChannel:
    return constant_channel(np.eye(n) / n)


def identity_channel(n: int) -> KrausChannel:
    return KrausChannel((np.eye(n),))


def unitary_channel(u) -> KrausChannel:
    return KrausChannel((as_unitary(u),))


def amplitude_damping(gamma: float) -> KrausChannel:
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must be in [0, 1]")
    k0 = np.array([[1.0, 0.0], [0.0, np.sqrt(1.0 - gamma)]])
    k1 = np.array([[0.0, np.sqrt(gamma)], [0.0, 0.0]])
    return KrausChannel((k0, k1))


# --------------------------------------------------------------------------
# classification
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Constant:
    omega: np.ndarray

    tag = "Constant"


@dataclass(frozen=True, eq=False)
class DepUnitary:
    lam: float
    unitary: np.ndarray
    alternatives: Tuple["ChannelClass", ...] = field(default=(), compare=False)

    tag = "DepUnitary"


@dataclass(frozen=True, eq=False)
class DepTranspose:
    lam: float
    unitary: np.ndarray
    alternatives: Tuple["ChannelClass", ...] = field(default=(), compare=False)

    tag = "DepTranspose"


@dataclass(frozen=True)
class Other:
    min_choi_eigenvalue: float
    spectrum_residual: float

    tag = "Other"


ChannelClass = Union[Constant, DepUnitary, DepTranspose, Other]


def canonical_phase(u: np.ndarray) -> np.ndarray:
    """Rescale by a global phase so the largest-magnitude entry is real positive."""
    flat = u.reshape(-1)
    k = int(np.argmax(np.abs(flat)))
    out = u * (abs(flat[k]) / flat[k])
    out.reshape(-1)[k] = abs(flat[k])
    return out


def phase_distance(u: np.ndarray, v: np.ndarray) -> float:
    """``min_theta ||u - e^{i theta} v||_max``, evaluated at the overlap phase."""
    overlap = np.vdot(v, u)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return max_abs(u - phase * v)


def reconstruct_choi(cls: ChannelClass, n: int) -> Optional[np.ndarray]:
    if isinstance(cls, Constant):
        return np.kron(cls.omega, np.eye(n))
    if isinstance(cls, DepUnitary):
        return depolarized_unitary_choi(cls.lam, cls.unitary)
    if isinstance(cls, DepTranspose):
        return depolarized_transpose_choi(cls.lam, cls.unitary)
    return None


def _fit_pattern(eigs: np.ndarray, sizes: Tuple[int, int]) -> Tuple[float, float, float]:
    """Best two-level fit of descending ``eigs`` with top group ``sizes[0]``.

    Returns (top level, bottom level, max residual).
    """
    top, bottom = eigs[: sizes[0]], eigs[sizes[0]:]
    hi, lo = float(top.mean()), float(bottom.mean())
    resid = max(float(np.max(np.abs(top - hi))), float(np.max(np.abs(bottom - lo))))
    return hi, lo, resid


def _try_dep_unitary(m, n, eigs, vecs, tol) -> Tuple[Optional[DepUnitary], float]:
    best: Tuple[Optional[DepUnitary], float] = (None, np.inf)
    # lam > 0: the single eigenvalue is on top; lam < 0: at the bottom
    for single_on_top in (True, False):
        sizes = (1, n * n - 1) if single_on_top else (n * n - 1, 1)
        hi, lo, resid = _fit_pattern(eigs, sizes)
        single = hi if single_on_top else lo
        lam = (n * single - 1.0) / (n * n - 1.0)
        col = 0 if single_on_top else n * n - 1
        if resid < best[1]:
            best = (None, resid)
        if resid > 1e3 * tol:
            continue
        u = np.sqrt(n) * devectorize(vecs[:, col])
        if not is_unitary(u, 1e3 * tol):
            continue
        cand = DepUnitary(lam, canonical_phase(u))
        if max_abs(reconstruct_choi(cand, n) - m) <= tol:
            return cand, resid
    return best


def _try_dep_transpose(m, n, eigs, tol) -> Tuple[Optional[DepTranspose], float]:
    best: Tuple[Optional[DepTranspose], float] = (None, np.inf)
    sym, anti = n * (n + 1) // 2, n * (n - 1) // 2
    # lam > 0: symmetric subspace (lam + beta) on top; lam < 0: antisymmetric on top
    for sym_on_top in (True, False):
        sizes = (sym, anti) if sym_on_top else (anti, sym)
        hi, lo, resid = _fit_pattern(eigs, sizes)
        plus, minus = (hi, lo) if sym_on_top else (lo, hi)
        lam = 0.5 * (plus - minus)
        if resid < best[1]:
            best = (None, resid)
        if resid > 1e3 * tol or lam == 0.0:
            continue
        beta = (1.0 - lam) / n
        s = (m - beta * np.eye(n * n)) / lam
        pt = hermitian_eig(partial_transpose_second(s), tol=1e-6)
        u = np.sqrt(n) * devectorize(pt.eigenvectors[:, 0])
        if not is_unitary(u, 1e3 * tol):
            continue
        cand = DepTranspose(lam, canonical_phase(u))
        if max_abs(reconstruct_choi(cand, n) - m) <= tol:
            return cand, resid
    return best


def classify_choi(j, tol: float = DEFAULT.classifier) -> ChannelClass:
    """Classify a trace-preserving map given by its Choi matrix.

    Order: constant, then depolarized unitary, then depolarized transpose.
    A fitted ``|lambda| <= tol`` is reported as the constant channel onto
    ``1/n``. For qubits the transpose family coincides with the unitary
    one, so a unitary match also carries the transpose parameterization in
    ``alternatives`` when it exists.
    """
    m = j.matrix if isinstance(j, ChoiMatrix) else as_hermitian(j, 1e-9)
    n = bipartite_dim(m)

    omega = partial_trace(m, keep=0) / n
    if max_abs(m - np.kron(omega, np.eye(n))) <= tol:
        return Constant(0.5 * (omega + dagger(omega)))

    eig = hermitian_eig(m, tol=1e-9)
    eigs, vecs = eig.eigenvalues, eig.eigenvectors

    unitary_match, r_unitary = _try_dep_unitary(m, n, eigs, vecs, tol)
    if unitary_match is not None:
        if abs(unitary_match.lam) <= tol:
            return Constant(np.eye(n) / n)
        alt, _ = _try_dep_transpose(m, n, eigs, tol) if n == 2 else (None, 0.0)
        if alt is not None:
            return DepUnitary(unitary_match.lam, unitary_match.unitary, (alt,))
        return unitary_match

    transpose_match, r_transpose = _try_dep_transpose(m, n, eigs, tol)
    if transpose_match is not None:
        if abs(transpose_match.lam) <= tol:
            return Constant(np.eye(n) / n)
        return transpose_match

    return Other(float(eigs[-1]), float(min(r_unitary, r_transpose)))


def classify_channel(channel: KrausChannel, tol: float = DEFAULT.classifier) -> ChannelClass:
    return classify_choi(choi(channel), tol)
