"""Default numerical tolerances, kept in one place.

All tolerances are absolute unless the field name says otherwise. The
command line reads ``MAJORIZE_TOL`` to override them (see :func:`from_env`).
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass

ENV_VAR = "MAJORIZE_TOL"


@dataclass(frozen=True)
class Tolerances:
    hermiticity: float = 1e-12
    density_eig: float = 1e-10
    density_trace: float = 1e-10
    unitarity: float = 1e-9
    majorization: float = 1e-9
    bistochastic: float = 1e-9
    birkhoff: float = 1e-10
    cp: float = 1e-9
    kraus_tp: float = 1e-9
    choi_tp: float = 1e-8
    classifier: float = 1e-7
    entropy: float = 1e-9
    spectra: float = 1e-8
    unital: float = 1e-8
    spectral_gap: float = 1e-6
    lambda_slack: float = 1e-12
    jacobi_rel: float = 1e-14
    jacobi_sweeps: int = 100

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)


DEFAULT = Tolerances()


def parse_override(text: str, base: Tolerances = DEFAULT) -> Tolerances:
    """Apply an override string to ``base``.

    A bare number replaces the majorization tolerance; a JSON object
    replaces the named fields.
    """
    value = json.loads(text)
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return base.replace(majorization=float(value))
    if not isinstance(value, dict):
        raise ValueError(f"{ENV_VAR} must be a number or a JSON object")
    names = {f.name for f in dataclasses.fields(Tolerances)}
    unknown = set(value) - names
    if unknown:
        raise ValueError(f"unknown tolerance fields: {sorted(unknown)}")
    return base.replace(**value)


def from_env(environ=None) -> Tolerances:
    environ = os.environ if environ is None else environ
    text = environ.get(ENV_VAR)
    if not text:
        return DEFAULT
    return parse_override(text)
