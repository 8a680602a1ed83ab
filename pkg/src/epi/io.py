"""State files and report serialization.

A state file is UTF-8 JSON::

    {"dims": [2, 2, 2], "amps": [[re, im], ...], "label": "optional"}

with amplitudes in the mixed-radix order of :mod:`epi.state`. Floats are
written with ``repr`` (shortest round-trip form), so reading back a written
file reproduces every double bit for bit.
"""
from __future__ import annotations

import csv
import io
import json
import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from .state import PureState, make_state

DEFAULT_SEED = 42


class StateFileError(ValueError):
    pass


def state_to_dict(state: PureState, label: str | None = None) -> dict:
    d = {"dims": list(state.dims), "amps": [[float(z.real), float(z.imag)] for z in state.amps]}
    if label is not None:
        d["label"] = label
    return d


def state_from_dict(d: dict, renormalize: bool = False) -> PureState:
    try:
        dims = [int(x) for x in d["dims"]]
        amps = [complex(float(re), float(im)) for re, im in d["amps"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise StateFileError(f"malformed state: {exc}") from exc
    try:
        return make_state(dims, amps, renormalize=renormalize)
    except ValueError as exc:
        raise StateFileError(str(exc)) from exc


def read_state(path, renormalize: bool = False) -> tuple[PureState, str | None]:
    try:
        with open(path, encoding="utf-8") as fh:
            d = json.load(fh)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(d, dict):
        raise StateFileError(f"{path}: expected a JSON object")
    return state_from_dict(d, renormalize), d.get("label")


def write_state(path, state: PureState, label: str | None = None) -> None:
    Path(path).write_text(json.dumps(state_to_dict(state, label), indent=1) + "\n", encoding="utf-8")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, PureState):
        return state_to_dict(obj)
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "to_dict"):
        return _jsonable(obj.to_dict())
    if hasattr(obj, "__dataclass_fields__"):
        return _jsonable({k: getattr(obj, k) for k in obj.__dataclass_fields__})
    return obj


def dumps(obj) -> str:
    """Deterministic JSON (sorted keys, round-trip floats)."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=True) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


@dataclass
class RunConfig:
    seed: int = DEFAULT_SEED
    trials: int = 10**5
    tolerance: float = 1e-9
    out: str | None = None
    format: str = "json"
    threads: int = field(default_factory=lambda: os.cpu_count() or 1)

    @staticmethod
    def default_seed() -> int:
        env = os.environ.get("EPI_SEED")
        return int(env) if env not in (None, "") else DEFAULT_SEED
