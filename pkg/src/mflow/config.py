"""Tolerance and run-parameter defaults, with MFLOW_* environment overrides.

Precedence (resolved by the CLI): command-line flag > MFLOW_<NAME> env var
> built-in default. Library functions take explicit keyword arguments and
fall back to these defaults, so the numbers below are the single source of
truth for every tolerance in the package.
"""

from __future__ import annotations

import dataclasses
import os


@dataclasses.dataclass(frozen=True)
class Config:
    # matrix-core
    hermitian_tol: float = 1e-10   # relative: scaled by (1 + max|A|)
    unitary_tol: float = 1e-9      # absolute on max|U*U - I|
    eig_tol: float = 1e-9          # relative reconstruction error
    cluster_tol: float = 1e-8      # relative: scaled by (1 + |A|)
    polar_tol: float = 1e-9        # relative on |U P - B|
    psd_tol: float = 1e-9          # relative: scaled by (1 + |H|)
    # grad-flow
    grad_floor: float = 1e-12
    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    det_stop_tol: float = 1e-6
    max_steps: int = 10_000
    flow_m: int = 1
    # gelfand-tsetlin
    gt_tol: float = 1e-8           # relative: scaled by (1 + |A|)
    # polygon-bending
    closure_tol: float = 1e-9      # relative: scaled by max edge length
    bend_floor: float = 1e-12
    # shared
    seed: int = 0

    def describe(self) -> str:
        lines = []
        for f in dataclasses.fields(self):
            lines.append(f"{f.name} = {getattr(self, f.name)}")
        return "\n".join(lines)


DEFAULTS = Config()

ENV_PREFIX = "MFLOW_"

# Environment spelling: MFLOW_TOL_EIG overrides eig_tol, MFLOW_SEED overrides
# seed, etc. Tolerance fields drop their "_tol" suffix after the TOL_ marker.
_ENV_NAMES = {
    "hermitian_tol": "TOL_HERMITIAN",
    "unitary_tol": "TOL_UNITARY",
    "eig_tol": "TOL_EIG",
    "cluster_tol": "TOL_CLUSTER",
    "polar_tol": "TOL_POLAR",
    "psd_tol": "TOL_PSD",
    "grad_floor": "GRAD_FLOOR",
    "rel_tol": "TOL_REL",
    "abs_tol": "TOL_ABS",
    "det_stop_tol": "TOL_DET_STOP",
    "max_steps": "MAX_STEPS",
    "flow_m": "M",
    "gt_tol": "TOL_GT",
    "closure_tol": "TOL_CLOSURE",
    "bend_floor": "BEND_FLOOR",
    "seed": "SEED",
}


def env_var_name(field: str) -> str:
    return ENV_PREFIX + _ENV_NAMES[field]


def load_config(environ=None, **overrides) -> Config:
    """Build a Config from defaults, environment, then explicit overrides.

    Overrides with value None are ignored so CLI flags can be passed through
    unconditionally.
    """
    environ = os.environ if environ is None else environ
    values = {}
    for f in dataclasses.fields(Config):
        raw = environ.get(env_var_name(f.name))
        if raw is not None:
            values[f.name] = _convert(f.name, raw)
    for name, value in overrides.items():
        if value is not None:
            values[name] = value
    return dataclasses.replace(DEFAULTS, **values)


def _convert(field: str, raw: str):
    kind = Config.__dataclass_fields__[field].type
    if kind == "int":
        return int(raw)
    return float(raw)
