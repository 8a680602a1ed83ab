"""Sampling suites and numerical witnesses for the polygon inequality.

Every suite draws states from counter-based streams keyed by ``(seed, chunk)``
(see :func:`epi.state.haar_chunk`), so results do not depend on the number of
worker threads and the worst case of any run can be regenerated from its seed
and trial index.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .measures import Measure, concurrence_from_purification, concurrence_of_y, measure_of_y, qudit_y_from_density
from .polytope import SLACK_TOL, polygon_min_slack
from .state import (
    CHUNK,
    PureState,
    haar_chunk,
    make_state,
    qubit_lambda2_batch,
    schmidt_data,
    schmidt_spectrum,
    trial_state,
)

COUNTEREXAMPLE_TOL = 1e-6


@dataclass
class SuiteReport:
    suite: str
    trials: int
    failures: int
    min_slack: float
    worst_case: dict
    elapsed: float = 0.0
    tol: float = SLACK_TOL
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def to_dict(self) -> dict:
        return asdict(self)


def _state_record(dims, seed, trial) -> dict:
    st = trial_state(dims, seed, trial)
    return {
        "seed": int(seed),
        "trial": int(trial),
        "dims": list(dims),
        "amps": [[float(z.real), float(z.imag)] for z in st.amps],
    }


def _run_chunks(fn, trials: int, workers: int):
    """Map ``fn(chunk_index, rows)`` over the chunks covering ``trials``."""
    jobs = [(c, min(CHUNK, trials - c * CHUNK)) for c in range(math.ceil(trials / CHUNK))]
    if workers and workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            return list(pool.map(lambda j: fn(*j), jobs))
    return [fn(*j) for j in jobs]


def _reduce(results, trials: int, tol: float):
    """Concatenate per-trial minimum slacks and find failures and the worst trial."""
    per_trial = np.concatenate(results) if results else np.zeros(0)
    worst = int(np.argmin(per_trial))
    return per_trial, int(np.count_nonzero(per_trial < -tol)), worst


def marginal_values_batch(amps: np.ndarray, n: int, measure) -> np.ndarray:
    y = np.clip(2.0 * qubit_lambda2_batch(amps, n), 0.0, 1.0)
    return np.asarray(measure_of_y(measure, y))


def verify_polygon(
    N: int, measure=Measure.Y, trials: int = 10**5, seed: int = 42, tol: float = SLACK_TOL, workers: int = 1
) -> SuiteReport:
    """Check ``E_j <= sum_{k != j} E_k`` on Haar-random ``N``-qubit states."""
    measure = Measure(measure)
    dims = (2,) * N
    t0 = time.perf_counter()

    def chunk(c, rows):
        vals = marginal_values_batch(haar_chunk(dims, seed, c)[:rows], N, measure)
        return polygon_min_slack(vals)

    per_trial, failures, worst = _reduce(_run_chunks(chunk, trials, workers), trials, tol)
    extra = {"N": N, "measure": measure.value}
    if N == 1:
        # the single inequality reads E_0 <= 0
        extra["max_E1"] = float(-per_trial.min())
    report = SuiteReport(
        suite=f"polygon[N={N},{measure.value}]",
        trials=trials,
        failures=failures,
        min_slack=float(per_trial[worst]),
        worst_case=_state_record(dims, seed, worst),
        elapsed=time.perf_counter() - t0,
        tol=tol,
        extra=extra,
    )
    return report


def pair_factor_batch(amps: np.ndarray, n: int, j: int, k: int) -> np.ndarray:
    t = amps.reshape((amps.shape[0],) + (2,) * n)
    return np.moveaxis(t, (j + 1, k + 1), (1, 2)).reshape(amps.shape[0], 4, -1)


def sandwich_slacks(amps: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Lower and upper slack of ``sqrt(sum_k C_jk^2) <= C_j <= sum_{k!=j} C_k``.

    Returns ``(lower, upper, marginal C, pairwise C)`` with shapes
    ``(rows, n)``, ``(rows, n)``, ``(rows, n)`` and ``(rows, n, n)``.
    """
    c = concurrence_of_y(np.clip(2.0 * qubit_lambda2_batch(amps, n), 0.0, 1.0))
    pair = np.zeros((amps.shape[0], n, n))
    for j, k in combinations(range(n), 2):
        pair[:, j, k] = pair[:, k, j] = concurrence_from_purification(pair_factor_batch(amps, n, j, k))
    lower = c - np.sqrt(np.sum(pair**2, axis=2))
    upper = c.sum(axis=1, keepdims=True) - 2.0 * c
    return lower, upper, c, pair


def verify_sandwich(N: int, trials: int = 10**4, seed: int = 42, tol: float = SLACK_TOL, workers: int = 1) -> SuiteReport:
    """Monogamy lower bound and polygon upper bound on the concurrence."""
    if N < 3:
        raise ValueError("the sandwich suite needs N >= 3")
    dims = (2,) * N
    t0 = time.perf_counter()

    def chunk(c, rows):
        lower, upper, _, _ = sandwich_slacks(haar_chunk(dims, seed, c)[:rows], N)
        return np.stack([lower.min(axis=1), upper.min(axis=1)], axis=1)

    both = np.concatenate(_run_chunks(chunk, trials, workers))
    per_trial = both.min(axis=1)
    worst = int(np.argmin(per_trial))
    return SuiteReport(
        suite=f"sandwich[N={N},C]",
        trials=trials,
        failures=int(np.count_nonzero(per_trial < -tol)),
        min_slack=float(per_trial[worst]),
        worst_case=_state_record(dims, seed, worst),
        elapsed=time.perf_counter() - t0,
        tol=tol,
        extra={
            "N": N,
            "lower_min_slack": float(both[:, 0].min()),
            "upper_min_slack": float(both[:, 1].min()),
            "lower_quantiles": np.quantile(both[:, 0], [0.0, 0.5, 1.0]).tolist(),
            "upper_quantiles": np.quantile(both[:, 1], [0.0, 0.5, 1.0]).tolist(),
        },
    )


def sandwich_for_state(state: PureState) -> dict:
    """Per-party lower/upper sandwich slack for a single qubit state."""
    lower, upper, c, pair = sandwich_slacks(state.amps[None, :], state.n_parties)
    return {
        "C": c[0].tolist(),
        "pairwise_C": pair[0].tolist(),
        "lower_slack": lower[0].tolist(),
        "upper_slack": upper[0].tolist(),
    }


# -- appendix witness ----------------------------------------------------------------


@dataclass
class WitnessReport:
    vacuous: bool
    lambdas: tuple[float, float] = (1.0, 0.0)
    x: np.ndarray | None = None
    y: np.ndarray | None = None
    residuals: dict = field(default_factory=dict)
    delta: float = 0.0
    delta_sum_of_squares: float = 0.0
    delta_conjugated_form: float = 0.0
    tol: float = 1e-9

    @property
    def passed(self) -> bool:
        if self.vacuous:
            return True
        return all(v <= self.tol for v in self.residuals.values()) and self.delta >= -self.tol

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k not in ("x", "y")}
        if self.x is not None:
            d["x"] = [[float(z.real), float(z.imag)] for z in self.x]
            d["y"] = [[float(z.real), float(z.imag)] for z in self.y]
        d["passed"] = self.passed
        return d


def _expand_in_local_bases(vec: np.ndarray, bases: Sequence[np.ndarray]) -> np.ndarray:
    """Coefficients of ``vec`` in the product basis ``(x)_i bases[i][:, n]``."""
    t = vec.reshape([b.shape[0] for b in bases])
    for ax, b in enumerate(bases):
        t = np.moveaxis(np.tensordot(b.conj().T, t, axes=([1], [ax])), 0, ax)
    return t.ravel()


def appendix_witness(state: PureState, tol: float = 1e-9) -> WitnessReport:
    """Recompute the identities behind the Y-inequality for party 0.

    ``g_1``, ``g_2`` (partners of party 0) are expanded in the product of the
    per-qubit Schmidt bases of parties 1..N-1, giving ``x`` and ``y``. Index 0
    of ``x``/``y`` is the all-``f_1`` basis string; a set bit at a party's
    position means that party sits in its ``f_2`` (smaller weight) vector.
    """
    if not state.is_qubits() or state.n_parties < 3:
        raise ValueError("the witness is defined for N >= 3 qubits")
    n = state.n_parties
    sd = schmidt_data(state, 0)
    l1, l2 = sd.spectrum.lambdas
    if l2 < 1e-12:
        return WitnessReport(vacuous=True, lambdas=(l1, l2), tol=tol)

    bases = [schmidt_data(state, i).local_basis for i in range(1, n)]
    x = _expand_in_local_bases(sd.cofactors[0], bases)
    y = _expand_in_local_bases(sd.cofactors[1], bases)
    ax, ay = np.abs(x) ** 2, np.abs(y) ** 2

    ys = np.array([2.0 * schmidt_spectrum(state, i).lambdas[1] for i in range(n)])
    digits = np.array(np.unravel_index(np.arange(2 ** (n - 1)), (2,) * (n - 1)))
    counts = digits.sum(axis=0)

    res = {
        "norm_x": abs(ax.sum() - 1.0),
        "norm_y": abs(ay.sum() - 1.0),
        "overlap_xy": abs(np.vdot(y, x)),
        "y1_equals_2l2": abs(ys[0] - 2.0 * l2),
        "y_sum_identity": abs(ys[1:].sum() - 2.0 * (l1 * counts @ ax + l2 * counts @ ay)),
    }
    # each Y_i picks the strings where party i is in its f_2 vector
    per_party = [2.0 * (l1 * ax[digits[i] == 1].sum() + l2 * ay[digits[i] == 1].sum()) for i in range(n - 1)]
    res["per_party_y"] = float(np.max(np.abs(np.array(per_party) - ys[1:])))
    lower = 2.0 * l2 * (ax[1:].sum() + ay[1:].sum())
    res["y_sum_lower_bound"] = max(0.0, lower - ys[1:].sum())

    x2, y2, xr, yr = x[1], y[1], x[2:], y[2:]
    s = np.sum(xr * yr.conj())
    # first, fully expanded form of Delta
    delta = (
        ax[1] * ay[2:].sum()
        + (ay[1] + ay[2:].sum()) * ax[2:].sum()
        - 2.0 * (x2 * y2.conj() * s.conj()).real
        - abs(s) ** 2
    )
    # Lagrange form sum_{1 <= j < k} |x_j y_k - x_k y_j|^2 over indices past the first
    xs, ysv = x[1:], y[1:]
    cross = np.outer(xs, ysv)
    delta_sos = float(np.sum(np.abs(np.triu(cross - cross.T, 1)) ** 2))
    # a tempting closed form with conjugated cross terms; it agrees only for real amplitudes
    j, k = np.triu_indices(len(xr), 1)
    conj_form = np.sum(np.abs(x2 * yr - y2.conj() * xr.conj()) ** 2) + np.sum(
        np.abs(xr[k] * yr[j] - xr[j].conj() * yr[k].conj()) ** 2
    )

    gap = 1.0 - ax[0] - ay[0]
    res["delta_identity"] = abs(gap - delta)
    res["delta_sos_identity"] = abs(gap - delta_sos)
    return WitnessReport(
        vacuous=False,
        lambdas=(l1, l2),
        x=x,
        y=y,
        residuals={k: float(v) for k, v in res.items()},
        delta=float(delta),
        delta_sum_of_squares=delta_sos,
        delta_conjugated_form=float(conj_form),
        tol=tol,
    )


def witness_suite(N: int, trials: int = 1000, seed: int = 42, tol: float = 1e-9) -> SuiteReport:
    dims = (2,) * N
    t0 = time.perf_counter()
    worst_res, worst_trial, failures, vacuous = -np.inf, 0, 0, 0
    max_res: dict = {}
    min_delta = np.inf
    for t in range(trials):
        rep = appendix_witness(trial_state(dims, seed, t), tol)
        if rep.vacuous:
            vacuous += 1
            continue
        r = max(rep.residuals.values())
        for key, v in rep.residuals.items():
            max_res[key] = max(max_res.get(key, 0.0), v)
        min_delta = min(min_delta, rep.delta)
        failures += not rep.passed
        if r > worst_res:
            worst_res, worst_trial = r, t
    return SuiteReport(
        suite=f"appendix_witness[N={N}]",
        trials=trials,
        failures=failures,
        min_slack=float(min(min_delta, -worst_res)),
        worst_case=_state_record(dims, seed, worst_trial),
        elapsed=time.perf_counter() - t0,
        tol=tol,
        extra={"max_residuals": max_res, "min_delta": float(min_delta), "vacuous": vacuous},
    )


# -- concavity lemma -----------------------------------------------------------------


@dataclass
class LemmaReport:
    measure: Measure
    grid: int
    min_first_difference: float
    max_second_difference: float
    min_chord_gap: float
    chord_points: tuple[float, ...]
    tol: float = 1e-9

    @property
    def monotone(self) -> bool:
        return self.min_first_difference >= -self.tol

    @property
    def concave(self) -> bool:
        return self.max_second_difference <= self.tol

    @property
    def chord_bound(self) -> bool:
        return self.min_chord_gap >= -self.tol

    @property
    def passed(self) -> bool:
        return self.monotone and self.concave and self.chord_bound


def verify_concavity_lemma(
    measure, grid: int = 10**4, draws: int = 64, seed: int = 42, tol: float = 1e-9, chord_points: Sequence[float] = ()
) -> LemmaReport:
    """Monotonicity, concavity and the chord bound ``E(Y) >= E(Yj) Y / Yj`` for ``Y <= Yj``."""
    measure = Measure(measure)
    yg = np.linspace(0.0, 1.0, grid)
    e = np.asarray(measure_of_y(measure, yg))
    d1 = np.diff(e)
    d2 = np.diff(e, 2)
    rng = np.random.default_rng(seed)
    pts = list(chord_points) + list(rng.uniform(1e-6, 1.0, draws)) + [1.0]
    gap = np.inf
    for yj in pts:
        mask = yg <= yj
        chord = measure_of_y(measure, yj) * yg[mask] / yj
        gap = min(gap, float(np.min(e[mask] - chord)))
    return LemmaReport(measure, grid, float(d1.min()), float(d2.max()), gap, tuple(float(p) for p in pts), tol)


# -- qudit conjecture search ---------------------------------------------------------


@dataclass
class SearchResult:
    M: int
    N: int
    dims: tuple[int, ...]
    best_slack: float
    best_state: PureState
    restarts: int
    converged: bool
    outside_conjecture: bool = False
    restart_slacks: list = field(default_factory=list)
    witness_path: str | None = None

    @property
    def counterexample(self) -> bool:
        return self.best_slack < -COUNTEREXAMPLE_TOL

    def to_dict(self) -> dict:
        d = {k: v for k, v in asdict(self).items() if k != "best_state"}
        d["dims"] = list(self.dims)
        d["best_state"] = {
            "dims": list(self.best_state.dims),
            "amps": [[float(z.real), float(z.imag)] for z in self.best_state.amps],
        }
        d["counterexample"] = self.counterexample
        return d


def qudit_marginals(amps: np.ndarray, dims: Sequence[int]) -> np.ndarray:
    """Normalized Schmidt weight of every party, each with its own local dimension."""
    t = np.asarray(amps).reshape(dims)
    out = np.empty(len(dims))
    for j, d in enumerate(dims):
        m = np.moveaxis(t, j, 0).reshape(d, -1)
        out[j] = qudit_y_from_density(m @ m.conj().T)
    return out


def qudit_polygon_slack(state: PureState) -> float:
    return float(polygon_min_slack(qudit_marginals(state.amps, state.dims)))


def _params_to_amps(p: np.ndarray) -> np.ndarray:
    half = p.size // 2
    z = p[:half] + 1j * p[half:]
    return z / np.linalg.norm(z)


def _search_start(rng: np.random.Generator, dims: Sequence[int], sparse: bool) -> np.ndarray:
    """Haar-random start, or a random superposition of a few basis kets.

    Sparse starts sit near the low-entanglement faces of the state space, where
    one party can be far more entangled than the rest; Haar-random states of
    many qudits almost never are.
    """
    D = int(np.prod(dims))
    if not sparse:
        return rng.standard_normal(D) + 1j * rng.standard_normal(D)
    k = int(rng.integers(2, min(2 * max(dims), D) + 1))
    z = np.zeros(D, dtype=complex)
    z[rng.choice(D, k, replace=False)] = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    return z


def conjecture_search(
    M: int,
    N: int,
    restarts: int = 50,
    iters: int = 20000,
    seed: int = 42,
    dims: Sequence[int] | None = None,
    initial: Sequence[PureState] = (),
    witness_dir: str | Path | None = None,
) -> SearchResult:
    """Look for states violating the polygon inequality in the qudit ``Y``.

    Restarts alternate between Haar-random and sparse random starts (or take
    the next entry of ``initial``). Each is refined by Powell's derivative-free
    direction-set method on the ``2 * prod(dims)`` real and imaginary parts,
    renormalizing inside the objective, with at most ``iters`` objective
    evaluations. Restart ``r`` draws from the substream ``(seed, r)``.

    A best slack below ``-1e-6`` is a counterexample candidate; it is written
    as a state file into ``witness_dir`` when one is given.
    """
    dims = tuple(dims) if dims is not None else (M,) * N
    if len(dims) != N:
        raise ValueError("dims must have N entries")

    def objective(p):
        return float(polygon_min_slack(qudit_marginals(_params_to_amps(p), dims)))

    best = (np.inf, None, False)
    slacks = []
    for r in range(restarts):
        if r < len(initial):
            z = np.asarray(initial[r].amps)
        else:
            z = _search_start(np.random.default_rng([seed, r]), dims, sparse=r % 2 == 1)
        p0 = np.concatenate([z.real, z.imag]) / np.linalg.norm(z)
        res = minimize(objective, p0, method="Powell", options={"maxfev": iters, "xtol": 1e-8, "ftol": 1e-12})
        val = objective(res.x)
        slacks.append(val)
        if val < best[0]:
            best = (val, res.x, bool(res.success))
    state = make_state(dims, _params_to_amps(best[1]), renormalize=True)
    result = SearchResult(
        M=M,
        N=N,
        dims=dims,
        best_slack=qudit_polygon_slack(state),
        best_state=state,
        restarts=restarts,
        converged=best[2],
        outside_conjecture=len(set(dims)) > 1,
        restart_slacks=slacks,
    )
    if result.counterexample and witness_dir is not None:
        from .io import write_state

        path = Path(witness_dir) / f"conjecture_witness_M{M}_N{N}_seed{seed}.json"
        write_state(path, state, label=f"qudit polygon slack {result.best_slack!r}")
        result.witness_path = str(path)
    return result
