"""Pure states of N parties, reduced density matrices and Schmidt decompositions.

Amplitudes are stored as a flat complex vector indexed mixed-radix with the
first party as the most significant digit, i.e. the basis ket
``|s_0 s_1 ... s_{N-1}>`` sits at ``((s_0*d_1 + s_1)*d_2 + ...)``.  This is the
same layout as ``np.ravel_multi_index(s, dims)`` and ``amps.reshape(dims)``.

Parties are indexed from 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

NORM_TOL = 1e-10
ZERO_LAMBDA = 1e-12


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized pure state over a product of local dimensions."""

    dims: tuple[int, ...]
    amps: np.ndarray

    @property
    def n_parties(self) -> int:
        return len(self.dims)

    @property
    def tensor(self) -> np.ndarray:
        return self.amps.reshape(self.dims)

    def is_qubits(self) -> bool:
        return all(d == 2 for d in self.dims)

    def __repr__(self) -> str:
        return f"PureState(dims={list(self.dims)}, amps={np.array2string(self.amps, precision=4)})"


@dataclass(frozen=True)
class SchmidtSpectrum:
    """Eigenvalues of one party's reduced state, sorted nonincreasing."""

    lambdas: tuple[float, ...]
    party: int

    def __len__(self) -> int:
        return len(self.lambdas)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.lambdas, dtype=float)


@dataclass(frozen=True, eq=False)
class SchmidtData:
    """Schmidt decomposition ``sum_n sqrt(l_n) |f_n> (x) |g_n>`` across one party.

    ``local_basis[:, n]`` is ``|f_n>`` and ``cofactors[n]`` is ``|g_n>`` on the
    remaining parties (in their original order, flattened mixed-radix).
    """

    spectrum: SchmidtSpectrum
    local_basis: np.ndarray
    cofactors: np.ndarray

    def reconstruct(self, dims: Sequence[int]) -> np.ndarray:
        """Reassemble the flat amplitude vector in the original party order."""
        party = self.spectrum.party
        lam = self.spectrum.as_array()
        mat = (self.local_basis * np.sqrt(lam)) @ self.cofactors
        rest = [d for i, d in enumerate(dims) if i != party]
        return np.moveaxis(mat.reshape([dims[party]] + rest), 0, party).ravel()


def _check_dims(dims: Sequence[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise ValueError("need at least one party")
    if any(d < 2 for d in dims):
        raise ValueError(f"local dimensions must be >= 2, got {list(dims)}")
    return dims


def make_state(dims: Sequence[int], amps, renormalize: bool = False) -> PureState:
    """Build a :class:`PureState`.

    Parameters
    ----------
    dims : sequence of int
        Local dimensions, each at least 2.
    amps : array_like
        Complex amplitudes, length ``prod(dims)``, mixed-radix ordered.
    renormalize : bool
        Rescale to unit norm. When False the input must already be normalized
        to within 1e-10 or a ``ValueError`` is raised.
    """
    dims = _check_dims(dims)
    vec = np.array(amps, dtype=complex).ravel()
    if vec.size != int(np.prod(dims)):
        raise ValueError(f"expected {int(np.prod(dims))} amplitudes for dims {list(dims)}, got {vec.size}")
    if not np.all(np.isfinite(vec)):
        raise ValueError("amplitudes must be finite")
    norm = np.linalg.norm(vec)
    if norm == 0:
        raise ValueError("zero vector is not a state")
    if renormalize:
        vec = vec / norm
    elif abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"state norm {norm!r} differs from 1 by more than {NORM_TOL}")
    vec.setflags(write=False)
    return PureState(dims, vec)


def basis_state(dims: Sequence[int], digits: Sequence[int]) -> PureState:
    dims = _check_dims(dims)
    vec = np.zeros(int(np.prod(dims)), dtype=complex)
    vec[np.ravel_multi_index(tuple(digits), dims)] = 1.0
    return make_state(dims, vec)


def product_state(local_states: Sequence[Sequence[complex]]) -> PureState:
    """Tensor product of single-party vectors, each renormalized."""
    vec = np.ones(1, dtype=complex)
    dims = []
    for v in local_states:
        v = np.asarray(v, dtype=complex)
        vec = np.kron(vec, v / np.linalg.norm(v))
        dims.append(v.size)
    return make_state(dims, vec, renormalize=True)


def _check_party(state: PureState, party: int) -> int:
    if not 0 <= party < state.n_parties:
        raise IndexError(f"party {party} out of range for {state.n_parties} parties")
    return int(party)


def _party_matrix(state: PureState, party: int) -> np.ndarray:
    """State reshaped to (d_party, rest) with the other parties in order."""
    return np.moveaxis(state.tensor, party, 0).reshape(state.dims[party], -1)


def reduced_density(state: PureState, party: int) -> np.ndarray:
    """Partial trace over every party except ``party``."""
    party = _check_party(state, party)
    m = _party_matrix(state, party)
    rho = m @ m.conj().T
    return 0.5 * (rho + rho.conj().T)


def qubit_spectrum(rho: np.ndarray) -> np.ndarray:
    """Closed-form eigenvalues ``(l1, l2)`` of trace-one 2x2 Hermitian matrices.

    Works on a single matrix or a stack ``(..., 2, 2)``. The small eigenvalue
    is computed as ``2 det / (1 + sqrt(1 - 4 det))`` to avoid cancellation.
    """
    rho = np.asarray(rho)
    a = rho[..., 0, 0].real
    b = rho[..., 1, 1].real
    det = a * b - np.abs(rho[..., 0, 1]) ** 2
    tr = a + b
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    small = np.clip(2.0 * det / (tr + disc), 0.0, None)
    return np.stack([tr - small, small], axis=-1)


def _minor_det(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    minors = a[..., :, None] * b[..., None, :] - a[..., None, :] * b[..., :, None]
    return 0.5 * np.sum(np.abs(minors) ** 2, axis=(-2, -1))


def qubit_spectrum_from_factor(m: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``m m^dagger`` for ``m`` of shape ``(..., 2, r)``.

    The determinant of the Gram matrix cancels for nearly product rows, which
    the square root then inflates to ~1e-8. Those rows (``det < 1e-6 tr^2``)
    use the Cauchy-Binet sum of squared 2x2 minors instead, a sum of
    nonnegative terms that vanishes exactly for product states.
    """
    a, b = m[..., 0, :], m[..., 1, :]
    aa = np.sum(np.abs(a) ** 2, axis=-1)
    bb = np.sum(np.abs(b) ** 2, axis=-1)
    ab = np.sum(a * b.conj(), axis=-1)
    tr = aa + bb
    det = aa * bb - np.abs(ab) ** 2
    low = det < 1e-6 * tr * tr
    if np.ndim(det) == 0:
        det = _minor_det(a, b) if low else det
    elif low.any():
        det = det.copy()
        det[low] = _minor_det(a[low], b[low])
    disc = np.sqrt(np.maximum(tr * tr - 4.0 * det, 0.0))
    small = 2.0 * det / (tr + disc)
    return np.stack([tr - small, small], axis=-1)


def schmidt_spectrum(state: PureState, party: int) -> SchmidtSpectrum:
    party = _check_party(state, party)
    if state.dims[party] == 2:
        lam = qubit_spectrum_from_factor(_party_matrix(state, party))
    else:
        lam = np.clip(np.linalg.eigvalsh(reduced_density(state, party))[::-1], 0.0, None)
    return SchmidtSpectrum(tuple(float(v) for v in lam), party)


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude entry is real positive."""
    idx = np.argmax(np.abs(vecs), axis=0)
    ref = vecs[idx, np.arange(vecs.shape[1])]
    return vecs * (np.abs(ref) / ref)


def schmidt_data(state: PureState, party: int) -> SchmidtData:
    """Schmidt decomposition of ``state`` across ``party`` vs. the rest.

    For vanishing coefficients (``l_n <= 1e-12``) the partner vector is an
    arbitrary unit vector orthogonal to the others; if the complement is too
    small to hold one, a zero vector is returned in its place.
    """
    party = _check_party(state, party)
    rho = reduced_density(state, party)
    w, v = np.linalg.eigh(rho)
    order = np.argsort(-w, kind="stable")
    lam = np.clip(w[order], 0.0, None)
    basis = _fix_phases(v[:, order])
    m = _party_matrix(state, party)
    proj = basis.conj().T @ m
    d, rest = proj.shape
    cof = np.zeros((d, rest), dtype=complex)
    live = lam > ZERO_LAMBDA
    cof[live] = proj[live] / np.sqrt(lam[live])[:, None]
    dead = np.flatnonzero(~live)
    if dead.size:
        fill = null_space(cof[live].conj()) if live.any() else np.eye(rest, dtype=complex)
        for k, n in enumerate(dead[: fill.shape[1]]):
            cof[n] = fill[:, k]
    spectrum = SchmidtSpectrum(tuple(float(x) for x in lam), party)
    return SchmidtData(spectrum, basis, cof)


def _gaussian_amps(rng: np.random.Generator, shape) -> np.ndarray:
    g = rng.standard_normal((2,) + tuple(shape))
    z = g[0] + 1j * g[1]
    return z / np.linalg.norm(z, axis=-1, keepdims=True)


def haar_random(dims: Sequence[int], seed: int) -> PureState:
    """Haar-random pure state; complex Gaussian amplitudes, normalized."""
    dims = _check_dims(dims)
    rng = np.random.default_rng(seed)
    return make_state(dims, _gaussian_amps(rng, (int(np.prod(dims)),)))


# Batched helpers for the sampling suites. Rows of ``amps`` are states.

CHUNK = 1024


def haar_chunk(dims: Sequence[int], seed: int, chunk: int, size: int = CHUNK) -> np.ndarray:
    """Rows of Haar-random amplitudes for one chunk of a seeded stream.

    Trial ``t`` of a stream lives in chunk ``t // CHUNK`` at row ``t % CHUNK``,
    independent of how chunks are distributed across workers.
    """
    rng = np.random.default_rng([int(seed), int(chunk)])
    return _gaussian_amps(rng, (size, int(np.prod(dims))))


def trial_state(dims: Sequence[int], seed: int, trial: int) -> PureState:
    """Regenerate trial ``trial`` of the stream used by :func:`haar_chunk`."""
    rows = haar_chunk(dims, seed, trial // CHUNK)
    return make_state(dims, rows[trial % CHUNK])


def reduced_density_batch(amps: np.ndarray, dims: Sequence[int], party: int) -> np.ndarray:
    t = amps.reshape((amps.shape[0],) + tuple(dims))
    m = np.moveaxis(t, party + 1, 1).reshape(amps.shape[0], dims[party], -1)
    return np.einsum("tak,tbk->tab", m, m.conj())


def qubit_lambda2_batch(amps: np.ndarray, n: int) -> np.ndarray:
    """Smaller Schmidt coefficient of every party, shape ``(rows, n)``."""
    t = amps.reshape((amps.shape[0],) + (2,) * n)
    out = np.empty((amps.shape[0], n))
    for j in range(n):
        m = np.moveaxis(t, j + 1, 1).reshape(amps.shape[0], 2, -1)
        out[:, j] = qubit_spectrum_from_factor(m)[:, 1]
    return out
