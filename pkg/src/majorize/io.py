"""JSON documents for matrices, channels, Choi matrices and reports.

A matrix is an array of rows; each entry is either a bare real number or a
``[re, im]`` pair. Channel documents are ``{"dim": n, "kraus": [matrix, ...]}``
and Choi documents ``{"dim": n, "choi": matrix}``, both in the computational
basis. Floats go through ``repr`` and so round-trip exactly.
"""

from __future__ import annotations

import json
from typing import Any, Dict

import numpy as np

from . import channels as ch
from .errors import DimensionMismatch, InputError
from .majorization import BirkhoffDecomposition, MixedUnitaryWitness
from .properties import Counterexample, ExplorerSummary, TrialReport


class DocumentError(InputError):
    pass


def _entry(x) -> complex:
    if isinstance(x, bool):
        raise DocumentError("booleans are not matrix entries")
    if isinstance(x, (int, float)):
        return complex(float(x), 0.0)
    if isinstance(x, (list, tuple)) and len(x) == 2 and all(isinstance(t, (int, float)) for t in x):
        return complex(float(x[0]), float(x[1]))
    raise DocumentError(f"bad matrix entry {x!r}; expected a number or [re, im]")


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise DocumentError("a matrix must be a nonempty array of rows")
    width = len(obj[0])
    if any(len(r) != width for r in obj):
        raise DocumentError("matrix rows have different lengths")
    return np.array([[_entry(x) for x in row] for row in obj], dtype=np.complex128)


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def real_matrix_to_json(m) -> list:
    return [[float(x) for x in row] for row in np.asarray(m, dtype=float)]


def vector_from_json(obj) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise DocumentError("a vector must be a nonempty array of numbers")
    if any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in obj):
        raise DocumentError("vector entries must be real numbers")
    return np.array(obj, dtype=float)


def real_matrix_from_json(obj) -> np.ndarray:
    m = matrix_from_json(obj)
    if np.any(m.imag != 0):
        raise DocumentError("expected a real matrix")
    return m.real.copy()


def _dim(doc: Dict[str, Any]) -> int:
    n = doc.get("dim")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise DocumentError("document needs a positive integer 'dim'")
    return n


def channel_to_doc(channel: ch.KrausChannel) -> dict:
    return {"dim": channel.dim, "kraus": [matrix_to_json(k) for k in channel.kraus]}


def channel_from_doc(doc) -> ch.KrausChannel:
    if not isinstance(doc, dict) or "kraus" not in doc:
        raise DocumentError("channel document needs 'dim' and 'kraus'")
    n = _dim(doc)
    ops = [matrix_from_json(k) for k in doc["kraus"]]
    if any(k.shape != (n, n) for k in ops):
        raise DimensionMismatch(f"Kraus operators must be {n} x {n}")
    return ch.KrausChannel(tuple(ops))


def choi_to_doc(j) -> dict:
    m = j.matrix if isinstance(j, ch.ChoiMatrix) else np.asarray(j)
    n = j.dim if isinstance(j, ch.ChoiMatrix) else int(round(np.sqrt(m.shape[0])))
    return {"dim": n, "choi": matrix_to_json(m)}


def choi_from_doc(doc) -> np.ndarray:
    """Raw Choi array; validation is left to the caller."""
    if not isinstance(doc, dict) or "choi" not in doc:
        raise DocumentError("Choi document needs 'dim' and 'choi'")
    n = _dim(doc)
    m = matrix_from_json(doc["choi"])
    if m.shape != (n * n, n * n):
        raise DimensionMismatch(f"Choi matrix must be {n * n} x {n * n}")
    return m


def to_jsonable(x):
    if isinstance(x, np.ndarray):
        if np.iscomplexobj(x):
            if x.ndim == 2:
                return matrix_to_json(x)
            return [[float(z.real), float(z.imag)] for z in x]
        return x.tolist()
    if isinstance(x, (np.floating, np.integer, np.bool_)):
        return x.item()
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def counterexample_to_doc(c: Counterexample) -> dict:
    return {
        "trial": c.trial,
        "rho": matrix_to_json(c.rho),
        "sigma": matrix_to_json(c.sigma),
        "diagnostics": to_jsonable(c.diagnostics),
    }


def report_to_doc(report: TrialReport) -> dict:
    return {
        "trials": report.trials,
        "failures": report.failures,
        "seed": report.seed,
        "elapsed_s": report.elapsed_s,
        "counterexample": None if report.counterexample is None else counterexample_to_doc(report.counterexample),
    }


def classification_to_doc(cls: ch.ChannelClass) -> dict:
    doc: Dict[str, Any] = {"class": cls.tag}
    if isinstance(cls, ch.Constant):
        doc["omega"] = matrix_to_json(cls.omega)
    elif isinstance(cls, (ch.DepUnitary, ch.DepTranspose)):
        doc["lambda"] = float(cls.lam)
        doc["unitary"] = matrix_to_json(cls.unitary)
        doc["alternatives"] = [classification_to_doc(a) for a in cls.alternatives]
    else:
        doc["min_choi_eigenvalue"] = cls.min_choi_eigenvalue
        doc["spectrum_residual"] = cls.spectrum_residual
    return doc


def birkhoff_to_doc(d: BirkhoffDecomposition) -> dict:
    return {"terms": [{"weight": w, "permutation": list(p.image)} for w, p in d.terms]}


def witness_to_doc(w: MixedUnitaryWitness) -> dict:
    return {"terms": [{"weight": p, "unitary": matrix_to_json(u)} for p, u in w.terms]}


def explorer_to_doc(summary: ExplorerSummary) -> dict:
    return {
        "dim": summary.dim,
        "seed": summary.seed,
        "rho0_spectrum": list(summary.rho0_spectrum),
        "trials_per_channel": summary.trials_per_channel,
        "elapsed_s": summary.elapsed_s,
        "rows": [
            {
                "id": r.channel_id,
                "source": r.source,
                "preserved": r.preserved,
                "failures": r.failures,
                "class": r.class_tag,
                "lambda": r.lam,
                "residual": r.residual,
            }
            for r in summary.rows
        ],
    }


def dumps(doc) -> str:
    return json.dumps(doc, allow_nan=False)
