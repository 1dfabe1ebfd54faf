"""Seeded Monte-Carlo checks of majorization, entropy and orbit properties.

Every trial draws from its own stream ``trial_rng(seed, index)``, so a
report depends only on its inputs and the master seed, and the first
counterexample is always the one with the lowest trial index.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np

from .channels import (
    KrausChannel,
    Other,
    classify_channel,
    choi,
    depolarized_transpose,
    depolarized_unitary,
    lambda_range,
    reconstruct_choi,
)
from .config import DEFAULT
from .errors import BadDimension, DimensionMismatch, NotUnital, SpectrumDegenerate
from .linalg import (
    SeedLike,
    as_density,
    dagger,
    hermitian_eig,
    make_rng,
    max_abs,
    random_haar_unitary,
    sample_simplex,
    spectrum,
    trial_rng,
)
from .majorization import majorization_gaps, majorizes_op, majorizes_vec, random_bistochastic


@dataclass(frozen=True, eq=False)
class Counterexample:
    trial: int
    rho: np.ndarray
    sigma: np.ndarray
    diagnostics: Dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class TrialReport:
    trials: int
    failures: int
    seed: int
    elapsed_s: float
    counterexample: Optional[Counterexample] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


@dataclass(frozen=True, eq=False)
class MajorizationPair:
    """``lower`` is majorized by ``upper``."""

    lower: np.ndarray
    upper: np.ndarray
    lower_spectrum: np.ndarray
    upper_spectrum: np.ndarray


def _conjugate_diag(u: np.ndarray, p: np.ndarray) -> np.ndarray:
    m = (u * p) @ dagger(u)
    return 0.5 * (m + dagger(m))


def pair_from(
    upper_spectrum: Sequence[float], mixing: np.ndarray, v: np.ndarray, w: np.ndarray
) -> MajorizationPair:
    """``sigma = W diag(s) W^dagger`` and ``rho = V diag(D s) V^dagger`` with ``s`` sorted."""
    s = np.sort(np.asarray(upper_spectrum, dtype=float))[::-1]
    a = np.asarray(mixing, dtype=float) @ s
    if not majorizes_vec(a, s):
        raise ValueError("mixing matrix does not produce a majorized spectrum")
    return MajorizationPair(_conjugate_diag(v, a), _conjugate_diag(w, s), a, s)


def sample_majorization_pair(n: int, seed: SeedLike = 0) -> MajorizationPair:
    """Random ``rho < sigma``.

    ``sigma`` has a uniform simplex spectrum and Haar eigenbasis; ``rho`` has
    spectrum ``D lambda(sigma)`` for a random bistochastic ``D`` and an
    independent Haar eigenbasis.
    """
    if n < 2:
        raise BadDimension("n must be >= 2")
    rng = make_rng(seed)
    s = sample_simplex(n, rng)
    w = random_haar_unitary(n, rng)
    d = random_bistochastic(n, rng)
    v = random_haar_unitary(n, rng)
    return pair_from(s, d, v, w)


def _timed_report(trials, failures, seed, started, counterexample) -> TrialReport:
    return TrialReport(trials, failures, int(seed), time.perf_counter() - started, counterexample)


def test_preservation(
    channel: KrausChannel, trials: int = 1000, seed: int = 0, tol: float = DEFAULT.majorization
) -> TrialReport:
    """Count sampled pairs ``rho < sigma`` for which ``Phi(rho) < Phi(sigma)`` fails."""
    started = time.perf_counter()
    n = channel.dim
    failures = 0
    first = None
    for i in range(trials):
        pair = sample_majorization_pair(n, trial_rng(seed, i))
        out_lo, out_hi = channel(pair.lower), channel(pair.upper)
        if majorizes_op(out_lo, out_hi, tol):
            continue
        failures += 1
        if first is None:
            s_lo, s_hi = spectrum(out_lo), spectrum(out_hi)
            gaps = majorization_gaps(s_lo, s_hi)
            first = Counterexample(
                i,
                pair.lower,
                pair.upper,
                {
                    "output_spectrum_rho": s_lo,
                    "output_spectrum_sigma": s_hi,
                    "max_prefix_excess": float(np.max(gaps[:-1])) if n > 1 else 0.0,
                    "total_difference": float(gaps[-1]),
                },
            )
    return _timed_report(trials, failures, seed, started, first)


def von_neumann_entropy(rho) -> float:
    """``-Tr(rho log2 rho)`` in bits."""
    p = np.clip(hermitian_eig(as_density(rho)).eigenvalues, 0.0, 1.0)
    p = p[p > 0]
    return float(-np.sum(p * np.log2(p)))


def test_li_property(
    n: int,
    trials: int = 1000,
    seed: int = 0,
    entropy_tol: float = DEFAULT.entropy,
    spectra_tol: float = DEFAULT.spectra,
) -> TrialReport:
    """Entropy against spectra for sampled majorization pairs.

    A trial fails when ``rho < sigma`` with different sorted spectra but
    entropies within ``entropy_tol`` (or ordered the wrong way), or when a
    unitarily rotated copy of ``sigma`` has a different entropy.
    """
    started = time.perf_counter()
    failures = 0
    first = None
    for i in range(trials):
        rng = trial_rng(seed, i)
        pair = sample_majorization_pair(n, rng)
        s_lo, s_hi = spectrum(pair.lower), spectrum(pair.upper)
        h_lo, h_hi = von_neumann_entropy(pair.lower), von_neumann_entropy(pair.upper)
        differ = max_abs(s_lo - s_hi) > spectra_tol
        if differ:
            bad = abs(h_lo - h_hi) <= entropy_tol or h_lo < h_hi - entropy_tol
        else:
            bad = abs(h_lo - h_hi) > entropy_tol
        u = random_haar_unitary(n, rng)
        rotated = u @ pair.upper @ dagger(u)
        h_rot = von_neumann_entropy(0.5 * (rotated + dagger(rotated)))
        bad_rot = abs(h_rot - h_hi) > entropy_tol
        if bad or bad_rot:
            failures += 1
            if first is None:
                first = Counterexample(
                    i,
                    pair.lower,
                    pair.upper,
                    {
                        "entropy_rho": h_lo,
                        "entropy_sigma": h_hi,
                        "entropy_rotated_sigma": h_rot,
                        "spectra_differ": bool(differ),
                    },
                )
    return _timed_report(trials, failures, seed, started, first)


def unitary_orbit_equivalent(a, b, tol: float = DEFAULT.spectra) -> bool:
    """``A = U B U^dagger`` for some unitary, i.e. equal sorted spectra."""
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    return max_abs(spectrum(a) - spectrum(b)) <= tol


def check_orbit_hypotheses(channel: KrausChannel, rho0, gap: float = DEFAULT.spectral_gap) -> np.ndarray:
    """Validate ``rho0`` (simple, strictly positive spectrum) and unitality.

    Returns the descending spectrum of ``rho0``.
    """
    rho0 = as_density(rho0)
    if rho0.shape != (channel.dim, channel.dim):
        raise DimensionMismatch("rho0 and channel dimensions differ")
    s = spectrum(rho0)
    gaps = -np.diff(np.concatenate((s, [0.0])))
    if np.any(gaps <= gap):
        raise SpectrumDegenerate(f"rho0 spectrum {s} is not strictly decreasing and positive")
    n = channel.dim
    err = max_abs(channel(np.eye(n)) - np.eye(n))
    if err > DEFAULT.unital:
        raise NotUnital(f"||Phi(1) - 1||_max = {err:.3g}")
    return s


def test_orbit_preservation(
    channel: KrausChannel,
    rho0,
    trials: int = 1000,
    seed: int = 0,
    tol: float = DEFAULT.spectra,
) -> TrialReport:
    """Count Haar rotations ``rho = U rho0 U^dagger`` with ``Phi(rho)`` off the orbit of ``Phi(rho0)``."""
    started = time.perf_counter()
    check_orbit_hypotheses(channel, rho0)
    rho0 = np.asarray(rho0, dtype=np.complex128)
    n = channel.dim
    target = spectrum(channel(rho0))
    failures = 0
    first = None
    for i in range(trials):
        u = random_haar_unitary(n, trial_rng(seed, i))
        rho = _hermitize(u @ rho0 @ dagger(u))
        out = spectrum(channel(rho))
        if max_abs(out - target) <= tol:
            continue
        failures += 1
        if first is None:
            first = Counterexample(
                i,
                rho,
                rho0,
                {"output_spectrum_rho": out, "output_spectrum_rho0": target},
            )
    return _timed_report(trials, failures, seed, started, first)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m + dagger(m))


for _f in (test_preservation, test_li_property, test_orbit_preservation):
    _f.__test__ = False  # keep pytest from collecting these when imported


# --------------------------------------------------------------------------
# unital channels and the conjecture explorer
# --------------------------------------------------------------------------


def _inverse_sqrt(s: np.ndarray) -> np.ndarray:
    w, v = hermitian_eig(_hermitize(s))
    return (v / np.sqrt(w)) @ dagger(v)


def random_unital_channel(
    n: int,
    seed: SeedLike = 0,
    n_kraus: int = 2,
    iterations: int = 50,
    tol: float = DEFAULT.unital,
    max_attempts: int = 20,
) -> KrausChannel:
    """Random unital channel by alternating trace and unit normalization.

    Starting from Ginibre Kraus operators, rescale ``K -> K S^{-1/2}`` with
    ``S = sum K^dagger K`` (trace preserving), alternating with
    ``K -> T^{-1/2} K`` for ``T = sum K K^dagger`` (the same step on the
    adjoint Kraus set). Each round ends on the trace-preserving step; accept
    once the unit residual is below ``tol`` too, otherwise redraw.
    """
    rng = make_rng(seed)
    eye = np.eye(n)
    for _ in range(max_attempts):
        ks = [rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)) for _ in range(n_kraus)]
        for _ in range(iterations):
            l = _inverse_sqrt(sum(k @ dagger(k) for k in ks))
            ks = [l @ k for k in ks]
            r = _inverse_sqrt(sum(dagger(k) @ k for k in ks))
            ks = [k @ r for k in ks]
            tp = max_abs(sum(dagger(k) @ k for k in ks) - eye)
            un = max_abs(sum(k @ dagger(k) for k in ks) - eye)
            if tp <= tol and un <= tol:
                return KrausChannel(tuple(ks))
    raise RuntimeError("unital sampler did not converge")


def default_rho0(d: int) -> np.ndarray:
    """``diag(d, d-1, ..., 1) / (d(d+1)/2)``, a fixed state with simple spectrum."""
    p = np.arange(d, 0, -1, dtype=float)
    return np.diag(p / p.sum()).astype(np.complex128)


@dataclass(frozen=True)
class ExplorerRow:
    channel_id: int
    source: str
    preserved: bool
    failures: int
    class_tag: Optional[str]
    lam: Optional[float]
    residual: Optional[float]


@dataclass(frozen=True)
class ExplorerSummary:
    dim: int
    seed: int
    rho0_spectrum: tuple
    trials_per_channel: int
    rows: tuple
    elapsed_s: float

    def table(self) -> str:
        head = f"{'id':>4}  {'source':<14} {'preserved':<9} {'fails':>5}  {'class':<12} {'lambda':>14}  {'residual':>10}"
        lines = [head, "-" * len(head)]
        for r in self.rows:
            lam = "" if r.lam is None else f"{r.lam:.12g}"
            res = "" if r.residual is None else f"{r.residual:.3g}"
            lines.append(
                f"{r.channel_id:>4}  {r.source:<14} {str(r.preserved):<9} {r.failures:>5}  "
                f"{r.class_tag or '-':<12} {lam:>14}  {res:>10}"
            )
        return "\n".join(lines)


def _form_channels(d: int, rng: np.random.Generator, per_family: int):
    ru, rt = lambda_range("unitary", d), lambda_range("transpose", d)
    out = [
        ("dep-unitary", depolarized_unitary(ru.lo, random_haar_unitary(d, rng))),
        ("dep-transpose", depolarized_transpose(rt.hi, random_haar_unitary(d, rng))),
    ]
    for _ in range(per_family):
        out.append(("dep-unitary", depolarized_unitary(rng.uniform(ru.lo, ru.hi), random_haar_unitary(d, rng))))
        out.append(("dep-transpose", depolarized_transpose(rng.uniform(rt.lo, rt.hi), random_haar_unitary(d, rng))))
    return out


def conjecture_explorer(
    d: int,
    channel_samples: int = 20,
    trials_per_channel: int = 1000,
    seed: int = 0,
    form_samples: int = 2,
    n_kraus: int = 2,
) -> ExplorerSummary:
    """Orbit preservation and classification for sampled unital channels at ``d >= 3``.

    Runs constructed members of both families (including the CP boundary
    of each) next to ``channel_samples`` random unital channels. Channels
    with no orbit failures are classified. Nothing is concluded about the
    conjecture itself; the table is the output.
    """
    if d < 3:
        raise BadDimension("the explorer is for d >= 3")
    started = time.perf_counter()
    rng = make_rng(seed)
    channels = _form_channels(d, rng, form_samples)
    channels += [
        ("random-unital", random_unital_channel(d, rng, n_kraus=n_kraus)) for _ in range(channel_samples)
    ]
    rho0 = default_rho0(d)
    rows: List[ExplorerRow] = []
    for idx, (source, ch) in enumerate(channels):
        report = test_orbit_preservation(ch, rho0, trials_per_channel, seed)
        tag = lam = residual = None
        if report.passed:
            cls = classify_channel(ch)
            tag = cls.tag
            lam = getattr(cls, "lam", None)
            if isinstance(cls, Other):
                residual = cls.spectrum_residual
            else:
                residual = max_abs(reconstruct_choi(cls, d) - choi(ch).matrix)
        rows.append(ExplorerRow(idx, source, report.passed, report.failures, tag, lam, residual))
    return ExplorerSummary(
        d,
        int(seed),
        tuple(float(x) for x in np.diag(rho0).real),
        trials_per_channel,
        tuple(rows),
        time.perf_counter() - started,
    )
