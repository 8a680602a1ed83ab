"""Geometry of the region of the unit hypercube allowed by the polygon inequality.

A point ``E = (E_0, ..., E_{N-1})`` is allowed when every coordinate is at most
the sum of the others, equivalently ``max_j E_j <= E_T / 2`` with
``E_T = sum_j E_j``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial, sqrt
from typing import Sequence

import numpy as np

from .measures import EntanglementVector, Measure
from .state import CHUNK

SLACK_TOL = 1e-9


@dataclass(frozen=True)
class SlackReport:
    measure: Measure | None
    slacks: tuple[float, ...]
    sharing_slacks: tuple[float, ...]
    min_slack: float
    satisfied: bool
    boundary: tuple[bool, ...]
    tol: float = SLACK_TOL

    @property
    def worst_party(self) -> int:
        return int(np.argmin(self.slacks))


def polygon_slack(E, tol: float = SLACK_TOL) -> SlackReport:
    """Slack ``sum_{k != j} E_k - E_j`` of every polygon inequality.

    ``E`` may be an :class:`EntanglementVector` or a plain sequence.
    """
    measure = None
    if isinstance(E, EntanglementVector):
        measure, E = E.measure, E.values
    vals = np.asarray(E, dtype=float)
    if vals.size == 0:
        raise ValueError("empty entanglement vector")
    total = vals.sum()
    slacks = total - 2.0 * vals
    sharing = total / 2.0 - vals
    min_slack = float(slacks.min())
    return SlackReport(
        measure=measure,
        slacks=tuple(float(s) for s in slacks),
        sharing_slacks=tuple(float(s) for s in sharing),
        min_slack=min_slack,
        satisfied=min_slack >= -tol,
        boundary=tuple(bool(abs(s) <= tol) for s in slacks),
        tol=tol,
    )


def polygon_min_slack(values: np.ndarray) -> np.ndarray:
    """Row-wise minimum slack for a ``(rows, N)`` array of points."""
    return values.sum(axis=-1) - 2.0 * values.max(axis=-1)


def _check_n(N: int, lo: int = 2) -> int:
    if int(N) != N or N < lo:
        raise ValueError(f"N must be an integer >= {lo}, got {N}")
    return int(N)


def excluded_simplex_volume(N: int) -> float:
    """Volume ``1/N!`` cut from the cube by a single inequality."""
    return 1.0 / factorial(_check_n(N))


def available_volume(N: int) -> float:
    """Volume ``1 - 1/(N-1)!`` of the allowed region."""
    return 1.0 - 1.0 / factorial(_check_n(N) - 1)


def _check_t(t, hi: float):
    arr = np.asarray(t, dtype=float)
    if np.any(arr < 0) or np.any(arr > hi) or np.any(~np.isfinite(arr)):
        raise ValueError(f"E_T must lie in [0, {hi}]")
    return arr


def capacity_n3(E_T):
    """Sharing capacity for three qubits, piecewise quadratic in ``E_T``."""
    t = _check_t(E_T, 3.0)
    out = (sqrt(3.0) / 2.0) * np.where(t <= 2.0, t * t / 4.0, (3.0 - t) ** 2)
    return float(out) if out.ndim == 0 else out


def bspline_cross_section(N: int, t):
    """Cardinal B-spline of degree ``N-1`` on knots ``0, 1, ..., N`` (Cox-de Boor).

    This is the density of a sum of ``N`` independent uniforms on [0, 1],
    i.e. the diagonal cross-section of the unit ``N``-cube up to ``sqrt(N)``.
    """
    N = _check_n(N, 1)
    t = _check_t(t, float(N))
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    # degree-0 pieces on [i, i+1)
    b = np.stack([((i <= t) & (t < i + 1)).astype(float) for i in range(N)])
    for p in range(1, N):
        # with unit knot spacing both denominators equal p
        b = ((t - np.arange(N - p)[:, None]) * b[:-1] + (np.arange(p + 1, N + 1)[:, None] - t) * b[1:]) / p
    out = b[0]
    return float(out[0]) if scalar else out


def capacity_general(N: int, E_T):
    """Hyperarea of the allowed cross-section at fixed total ``E_T`` for ``N >= 3``."""
    N = _check_n(N, 3)
    t = _check_t(E_T, float(N))
    left = sqrt(N) * (1.0 - N / 2.0 ** (N - 1)) * t ** (N - 1) / factorial(N - 1)
    right = sqrt(N) * bspline_cross_section(N, np.clip(t, 2.0, N))
    out = np.where(t <= 2.0, left, right)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class CapacityCurve:
    N: int
    samples: tuple[tuple[float, float], ...]
    knots: tuple[int, ...] = field(default=())

    def as_array(self) -> np.ndarray:
        return np.asarray(self.samples)

    def peak(self) -> tuple[float, float]:
        arr = self.as_array()
        i = int(np.argmax(arr[:, 1]))
        return float(arr[i, 0]), float(arr[i, 1])


def capacity_curve(N: int, grid: int = 301) -> CapacityCurve:
    t = np.linspace(0.0, N, grid)
    a = capacity_n3(t) if N == 3 else capacity_general(N, t)
    return CapacityCurve(N, tuple(zip(t.tolist(), np.atleast_1d(a).tolist())), tuple(range(N + 1)))


# -- Monte Carlo oracles -------------------------------------------------------------


@dataclass(frozen=True)
class MCEstimate:
    value: float
    stderr: float
    hits: int
    samples: int

    def within(self, exact: float, nsigma: float = 3.0, bias: float = 0.0) -> bool:
        return abs(self.value - exact) <= nsigma * self.stderr + bias


def _uniform_chunks(N: int, samples: int, seed: int):
    """Yield blocks of uniform points from counter-based per-chunk streams."""
    size = CHUNK * 64
    for c, start in enumerate(range(0, samples, size)):
        rng = np.random.default_rng([int(seed), c])
        yield rng.random((min(size, samples - start), N))


def mc_volume(N: int, samples: int = 10**6, seed: int = 0, tol: float = SLACK_TOL) -> MCEstimate:
    """Fraction of uniform points in ``[0,1]^N`` that satisfy every inequality."""
    N = _check_n(N)
    if samples < 1000:
        raise ValueError("use at least 1000 samples")
    hits = sum(int(np.count_nonzero(polygon_min_slack(x) >= -tol)) for x in _uniform_chunks(N, samples, seed))
    p = hits / samples
    return MCEstimate(p, sqrt(p * (1 - p) / samples), hits, samples)


def mc_capacity(
    N: int, E_T: float, slab: float = 0.005, samples: int = 10**6, seed: int = 0, tol: float = SLACK_TOL
) -> MCEstimate:
    """Slab estimate of the cross-section hyperarea at total ``E_T``.

    Counts allowed points with ``|sum(E) - E_T| <= slab``. The slab has
    thickness ``2*slab/sqrt(N)`` along the body diagonal, so the area is the
    hit fraction times ``sqrt(N) / (2*slab)``. Bias is ``O(slab)`` at kinks of
    the exact curve and ``O(slab^2)`` elsewhere. Zero hits give value 0 and
    ``hits == 0`` rather than an error.
    """
    N = _check_n(N)
    hits = 0
    for x in _uniform_chunks(N, samples, seed):
        near = np.abs(x.sum(axis=1) - E_T) <= slab
        hits += int(np.count_nonzero(polygon_min_slack(x[near]) >= -tol))
    p = hits / samples
    scale = sqrt(N) / (2.0 * slab)
    return MCEstimate(p * scale, sqrt(p * (1 - p) / samples) * scale, hits, samples)


def diagonal_volume(N: int, capacity=None) -> float:
    """``(1/sqrt(N)) * integral_0^N A(t) dt`` by adaptive quadrature on each knot span."""
    from scipy.integrate import quad

    capacity = capacity or (lambda t: capacity_general(N, t))
    total = sum(quad(capacity, a, a + 1, epsabs=1e-13, epsrel=1e-12)[0] for a in range(N))
    return total / sqrt(N)


def in_allowed_region(points: Sequence[Sequence[float]], tol: float = SLACK_TOL) -> np.ndarray:
    return polygon_min_slack(np.atleast_2d(np.asarray(points, dtype=float))) >= -tol
