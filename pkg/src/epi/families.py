"""Three-qubit GHZ-class, W-class and product families with closed-form marginals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .measures import EntanglementVector, Measure, measure_of_y
from .polytope import SlackReport, polygon_slack
from .state import PureState, make_state, product_state

W_BAND = 1e-12
NORM_TOL = 1e-10


@dataclass(frozen=True)
class GhzParams:
    theta: float

    def __post_init__(self):
        if not np.isfinite(self.theta):
            raise ValueError("theta must be finite")


@dataclass(frozen=True)
class WParams:
    """Amplitudes of ``|100>``, ``|010>``, ``|001>``. Only the moduli matter."""

    alpha: complex
    beta: complex
    gamma: complex

    def __post_init__(self):
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2 + abs(self.gamma) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"W amplitudes must be normalized, |a|^2+|b|^2+|c|^2 = {norm}")

    @property
    def weights(self) -> tuple[float, float, float]:
        return abs(self.alpha) ** 2, abs(self.beta) ** 2, abs(self.gamma) ** 2

    @classmethod
    def from_weights(cls, a2: float, b2: float, phases=(0.0, 0.0, 0.0)) -> "WParams":
        c2 = max(1.0 - a2 - b2, 0.0)
        amps = np.sqrt([a2, b2, c2]) * np.exp(1j * np.asarray(phases))
        return cls(*(complex(z) for z in amps))


@dataclass(frozen=True)
class ProductParams:
    """Each qubit in ``cos(t)|0> + sin(t)|1>``."""

    angles: tuple[float, float, float]


def ghz_state(p: GhzParams) -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0], amps[7] = np.cos(p.theta), np.sin(p.theta)
    return make_state([2, 2, 2], amps, renormalize=True)


def ghz_y(p: GhzParams, measure=Measure.Y) -> EntanglementVector:
    y = 1.0 - abs(np.cos(2.0 * p.theta))
    return EntanglementVector(Measure(measure), (measure_of_y(measure, y),) * 3)


def w_state(p: WParams) -> PureState:
    amps = np.zeros(8, dtype=complex)
    amps[0b100], amps[0b010], amps[0b001] = p.alpha, p.beta, p.gamma
    return make_state([2, 2, 2], amps, renormalize=True)


def w_y(p: WParams, measure=Measure.Y) -> EntanglementVector:
    """Closed-form marginals, dispatching on which weight (if any) reaches 1/2."""
    a, b, c = p.weights
    if a >= 0.5 - W_BAND:
        ys = (2 * (b + c), 2 * b, 2 * c)
    elif b >= 0.5 - W_BAND:
        ys = (2 * a, 2 * (a + c), 2 * c)
    elif c >= 0.5 - W_BAND:
        ys = (2 * a, 2 * b, 2 * (a + b))
    else:
        ys = (2 * a, 2 * b, 2 * c)
    ys = np.clip(ys, 0.0, 1.0)
    return EntanglementVector(Measure(measure), tuple(np.atleast_1d(measure_of_y(measure, ys))))


def product_family_state(p: ProductParams) -> PureState:
    return product_state([[np.cos(t), np.sin(t)] for t in p.angles])


@dataclass(frozen=True)
class SweepRow:
    params: object
    vector: EntanglementVector
    slack: SlackReport


def _ghz_grid(n: int):
    return [GhzParams(float(t)) for t in np.linspace(0.0, np.pi / 2, n)]


def _w_grid(n: int):
    """Lattice of weight triples on the simplex with ``n`` steps per edge."""
    steps = max(n - 1, 1)
    out = []
    for i in range(steps + 1):
        for j in range(steps + 1 - i):
            out.append(WParams.from_weights(i / steps, j / steps))
    return out


def default_grid(family: str, n: int) -> list:
    family = family.lower()
    if family == "ghz":
        return _ghz_grid(n)
    if family == "w":
        return _w_grid(n)
    if family == "product":
        return [ProductParams((float(t), float(t) / 2, float(t) / 3)) for t in np.linspace(0, np.pi, n)]
    raise ValueError(f"unknown family {family!r}")


def family_sweep(family: str, grid: Iterable | int, measure=Measure.Y) -> list[SweepRow]:
    """Closed-form vectors and slack along a parameter grid, in grid order.

    ``grid`` is either a sequence of parameter objects or an integer size for
    :func:`default_grid`.
    """
    family = family.lower()
    if family not in ("ghz", "w", "product"):
        raise ValueError(f"unknown family {family!r}")
    params: Sequence = default_grid(family, grid) if isinstance(grid, int) else list(grid)
    rows = []
    for p in params:
        if family == "ghz":
            vec = ghz_y(p, measure)
        elif family == "w":
            vec = w_y(p, measure)
        else:
            vec = EntanglementVector(Measure(measure), (0.0, 0.0, 0.0))
        rows.append(SweepRow(p, vec, polygon_slack(vec)))
    return rows


def family_state(params) -> PureState:
    if isinstance(params, GhzParams):
        return ghz_state(params)
    if isinstance(params, WParams):
        return w_state(params)
    if isinstance(params, ProductParams):
        return product_family_state(params)
    raise TypeError(f"not a family parameter: {params!r}")
