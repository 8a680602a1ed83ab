"""Marginal entanglement measures and two-qubit pairwise quantities.

All four marginal measures of a qubit against the rest of a pure state are
functions of the normalized Schmidt weight ``Y = 2*l2``:

* ``Y``  normalized Schmidt weight
* ``S``  von Neumann entropy (bits)
* ``C``  concurrence
* ``N``  negativity (normalized so a Bell pair scores 1)
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations

import numpy as np

from .state import PureState, SchmidtSpectrum, reduced_density, schmidt_spectrum

DOMAIN_TOL = 1e-12

# sigma_y (x) sigma_y, used for the spin flip
_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


class Measure(str, Enum):
    Y = "Y"
    S = "S"
    C = "C"
    N = "N"


@dataclass(frozen=True)
class EntanglementVector:
    """Point ``(E_0, ..., E_{N-1})`` in the unit hypercube for one measure."""

    measure: Measure
    values: tuple[float, ...]

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if np.any(vals < -DOMAIN_TOL) or np.any(vals > 1 + DOMAIN_TOL):
            raise ValueError(f"entanglement values must lie in [0, 1]: {vals}")
        object.__setattr__(self, "values", tuple(float(v) for v in np.clip(vals, 0.0, 1.0)))
        object.__setattr__(self, "measure", Measure(self.measure))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)

    @property
    def total(self) -> float:
        return float(sum(self.values))


def _qubit_lambdas(spec: SchmidtSpectrum) -> np.ndarray:
    if len(spec) != 2:
        raise ValueError(f"qubit measure needs a two-term spectrum, got {len(spec)} terms")
    return spec.as_array()


def schmidt_weight(spec: SchmidtSpectrum) -> float:
    """Schmidt weight ``K = 1 / (l1^2 + l2^2)``, between 1 and 2 for a qubit."""
    lam = _qubit_lambdas(spec)
    return float(1.0 / np.sum(lam**2))


def y_measure(spec: SchmidtSpectrum) -> float:
    """Normalized Schmidt weight ``1 - sqrt(2/K - 1)``, evaluated as ``2*l2``."""
    lam = _qubit_lambdas(spec)
    return float(np.clip(2.0 * lam.min(), 0.0, 1.0))


def _check_y(y):
    y = np.asarray(y, dtype=float)
    if np.any(y < -DOMAIN_TOL) or np.any(y > 1 + DOMAIN_TOL) or np.any(~np.isfinite(y)):
        raise ValueError("Y must lie in [0, 1]")
    return np.clip(y, 0.0, 1.0)


def _xlog2x(x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, x * np.log2(np.where(x > 0, x, 1.0)), 0.0)


def _scalar_or_array(out, y_in):
    return float(out) if np.ndim(y_in) == 0 else out


def entropy_of_y(y):
    """``S(Y) = 1 - [(2-Y) log2(2-Y) + Y log2 Y] / 2``; accepts scalars or arrays."""
    yy = _check_y(y)
    out = np.clip(1.0 - (_xlog2x(2.0 - yy) + _xlog2x(yy)) / 2.0, 0.0, 1.0)
    return _scalar_or_array(out, y)


def concurrence_of_y(y):
    """``C(Y) = sqrt(Y (2 - Y))``."""
    yy = _check_y(y)
    out = np.sqrt(np.clip(yy * (2.0 - yy), 0.0, 1.0))
    return _scalar_or_array(out, y)


def negativity_of_y(y):
    """``N(Y) = sqrt(Y (2 - Y))``, identical to the concurrence for pure qubit cuts."""
    return concurrence_of_y(y)


_OF_Y = {
    Measure.Y: lambda y: _scalar_or_array(_check_y(y), y),
    Measure.S: entropy_of_y,
    Measure.C: concurrence_of_y,
    Measure.N: negativity_of_y,
}


def measure_of_y(measure, y):
    return _OF_Y[Measure(measure)](y)


def marginal_vector(state: PureState, measure) -> EntanglementVector:
    """Entanglement of each qubit with the rest of ``state``."""
    if not state.is_qubits():
        raise ValueError("marginal_vector needs qubits only; use qudit_y for higher local dimensions")
    ys = [y_measure(schmidt_spectrum(state, j)) for j in range(state.n_parties)]
    measure = Measure(measure)
    return EntanglementVector(measure, tuple(np.atleast_1d(measure_of_y(measure, np.array(ys)))))


def qudit_y(spec: SchmidtSpectrum, M: int) -> float:
    """Normalized Schmidt weight of an ``M``-level party, ``1 - sqrt((M-K)/(K(M-1)))``."""
    lam = spec.as_array()
    if len(lam) != M:
        raise ValueError(f"spectrum has {len(lam)} terms but M = {M}")
    return float(_y_from_deviation(np.sum((lam - lam.sum() / M) ** 2), lam.sum(), M))


def qudit_y_from_purity(purity, M: int):
    """``Y`` from the purity ``sum(l**2)``; loses ~8 digits near ``Y = 1``."""
    K = 1.0 / np.asarray(purity, dtype=float)
    ratio = np.clip((M - K) / (K * (M - 1)), 0.0, 1.0)
    return 1.0 - np.sqrt(ratio)


def _y_from_deviation(dev2, tr, M: int):
    # (M - K) / (K (M - 1)) = M |rho - I/M|_F^2 / (M - 1) for unit trace, and the
    # squared distance from I/M is accurate right where the purity form cancels
    ratio = np.clip(M * np.asarray(dev2) / ((M - 1) * np.asarray(tr) ** 2), 0.0, 1.0)
    return 1.0 - np.sqrt(ratio)


def qudit_y_from_density(rho: np.ndarray):
    """``Y`` of one or a stack of ``M x M`` reduced states, via the distance to ``I/M``."""
    rho = np.asarray(rho)
    M = rho.shape[-1]
    tr = np.trace(rho, axis1=-2, axis2=-1).real
    dev = rho - (tr / M)[..., None, None] * np.eye(M)
    return _y_from_deviation(np.sum(np.abs(dev) ** 2, axis=(-2, -1)), tr, M)


# -- pairwise two-qubit quantities ---------------------------------------------------


def pair_density(state: PureState, j: int, k: int) -> np.ndarray:
    """Two-party reduced state on ``(j, k)`` as a ``d_j d_k`` square matrix, j first."""
    n = state.n_parties
    if j == k:
        raise ValueError("pair needs two distinct parties")
    if not (0 <= j < n and 0 <= k < n):
        raise IndexError(f"parties ({j}, {k}) out of range for {n} parties")
    t = np.moveaxis(state.tensor, (j, k), (0, 1))
    m = t.reshape(state.dims[j] * state.dims[k], -1)
    return m @ m.conj().T


def _mu_from_factor(a: np.ndarray) -> np.ndarray:
    """Wootters ``mu_i`` for ``rho = a a^dagger`` with ``a`` of shape ``(..., 4, r)``.

    ``sqrt(rho) rho~ sqrt(rho)`` has the nonzero spectrum of ``B^dagger B`` with
    the complex-symmetric ``B = a^T (sy x sy) a``, so the ``mu_i`` are the
    singular values of ``B``. No square roots of round-off eigenvalues appear.
    """
    b = np.swapaxes(a, -1, -2) @ _YY @ a
    sv = np.linalg.svd(b, compute_uv=False)
    pad = max(0, 4 - sv.shape[-1])
    if pad:
        sv = np.concatenate([sv, np.zeros(sv.shape[:-1] + (pad,))], axis=-1)
    return sv[..., :4]


def _concurrence_from_mu(mu):
    c = np.maximum(0.0, mu[..., 0] - mu[..., 1] - mu[..., 2] - mu[..., 3])
    return float(c) if np.ndim(c) == 0 else c


def wootters_concurrence(rho: np.ndarray, cutoff: float = 1e-14):
    """Concurrence of two-qubit density matrices (single ``(4, 4)`` or a stack).

    ``rho`` is factored through its eigendecomposition; eigenvalues below
    ``cutoff`` are treated as exact zeros.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + np.swapaxes(rho.conj(), -1, -2))
    w, v = np.linalg.eigh(rho)
    w = np.where(w > cutoff, w, 0.0)
    return _concurrence_from_mu(_mu_from_factor(v * np.sqrt(w)[..., None, :]))


def concurrence_from_purification(a: np.ndarray):
    """Concurrence of ``a a^dagger`` for purification factors ``(..., 4, r)``."""
    return _concurrence_from_mu(_mu_from_factor(np.asarray(a, dtype=complex)))


def partial_transpose(rho: np.ndarray) -> np.ndarray:
    """Transpose the second qubit of a ``(..., 4, 4)`` two-qubit matrix."""
    shp = rho.shape[:-2]
    r = rho.reshape(shp + (2, 2, 2, 2))
    return np.swapaxes(r, -1, -3).reshape(shp + (4, 4))


def pair_negativity_of(rho: np.ndarray):
    w = np.linalg.eigvalsh(partial_transpose(np.asarray(rho, dtype=complex)))
    n = 2.0 * np.sum(np.clip(-w, 0.0, None), axis=-1)
    return float(n) if np.ndim(n) == 0 else n


def binary_entropy(p):
    p = np.asarray(p, dtype=float)
    out = -_xlog2x(p) - _xlog2x(1.0 - p)
    return float(out) if out.ndim == 0 else out


def eof_of_concurrence(c):
    """Entanglement of formation of a two-qubit state with concurrence ``c``."""
    c = np.clip(np.asarray(c, dtype=float), 0.0, 1.0)
    return binary_entropy((1.0 + np.sqrt(1.0 - c**2)) / 2.0)


def _qubit_pair(state: PureState, j: int, k: int) -> np.ndarray:
    if state.dims[j] != 2 or state.dims[k] != 2:
        raise ValueError("pairwise quantities are defined for qubit parties only")
    return pair_density(state, j, k)


def pair_factor(state: PureState, j: int, k: int) -> np.ndarray:
    """Amplitudes arranged as ``(4, rest)`` so that the pair state is ``a a^dagger``."""
    _qubit_pair(state, j, k)
    return np.moveaxis(state.tensor, (j, k), (0, 1)).reshape(4, -1)


def pairwise_concurrence(state: PureState, j: int, k: int) -> float:
    return concurrence_from_purification(pair_factor(state, j, k))


def pairwise_negativity(state: PureState, j: int, k: int) -> float:
    return pair_negativity_of(_qubit_pair(state, j, k))


def pairwise_eof(state: PureState, j: int, k: int) -> float:
    return eof_of_concurrence(pairwise_concurrence(state, j, k))


def pairwise_matrix(state: PureState, kind: str = "C") -> np.ndarray:
    """Symmetric ``N x N`` table of pairwise C, N or EoF (zero diagonal)."""
    fn = {"C": pairwise_concurrence, "N": pairwise_negativity, "EoF": pairwise_eof}[kind]
    n = state.n_parties
    out = np.zeros((n, n))
    for j, k in combinations(range(n), 2):
        out[j, k] = out[k, j] = fn(state, j, k)
    return out


def marginal_concurrence(state: PureState, party: int) -> float:
    """``2 sqrt(det rho_j)`` for a qubit party; equals ``concurrence_of_y``."""
    rho = reduced_density(state, party)
    return float(2.0 * np.sqrt(max(np.linalg.det(rho).real, 0.0)))
