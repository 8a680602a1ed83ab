import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epi.measures import (
    EntanglementVector,
    Measure,
    concurrence_of_y,
    entropy_of_y,
    eof_of_concurrence,
    marginal_concurrence,
    marginal_vector,
    measure_of_y,
    negativity_of_y,
    pair_density,
    pairwise_concurrence,
    pairwise_eof,
    pairwise_matrix,
    pairwise_negativity,
    qudit_y,
    qudit_y_from_density,
    qudit_y_from_purity,
    schmidt_weight,
    wootters_concurrence,
    y_measure,
)
from epi.state import SchmidtSpectrum, basis_state, haar_random, make_state, schmidt_spectrum
from oracles import h2, pair_density_loops, wootters_bruteforce


def spec(*lam):
    return SchmidtSpectrum(tuple(lam), 0)


def w3():
    amps = np.zeros(8)
    amps[[4, 2, 1]] = 1 / np.sqrt(3)
    return make_state([2, 2, 2], amps)


def ghz(theta):
    amps = np.zeros(8)
    amps[0], amps[7] = np.cos(theta), np.sin(theta)
    return make_state([2, 2, 2], amps)


@pytest.mark.parametrize("lam, K", [((1, 0), 1.0), ((0.5, 0.5), 2.0), ((0.75, 0.25), 1.6)])
def test_schmidt_weight(lam, K):
    assert schmidt_weight(spec(*lam)) == pytest.approx(K, abs=1e-15)


def test_schmidt_weight_needs_two_terms():
    with pytest.raises(ValueError):
        schmidt_weight(spec(0.5, 0.25, 0.25))


@pytest.mark.parametrize("lam, y", [((1, 0), 0.0), ((0.5, 0.5), 1.0)])
def test_y_measure_examples(lam, y):
    assert y_measure(spec(*lam)) == pytest.approx(y, abs=1e-15)


def test_y_equals_schmidt_weight_form():
    for l2 in np.linspace(0, 0.5, 51):
        s = spec(1 - l2, l2)
        K = schmidt_weight(s)
        assert y_measure(s) == pytest.approx(1 - np.sqrt(2 / K - 1), abs=1e-7)


@pytest.mark.parametrize("theta", np.linspace(0, np.pi / 2, 11))
def test_y_measure_ghz(theta):
    for j in range(3):
        assert y_measure(schmidt_spectrum(ghz(theta), j)) == pytest.approx(1 - abs(np.cos(2 * theta)), abs=1e-12)


def test_entropy_values():
    assert entropy_of_y(0.0) == 0.0
    assert entropy_of_y(1.0) == 1.0
    # frozen from the formula; equals the binary entropy of l2 = 1/4
    assert entropy_of_y(0.5) == pytest.approx(0.8112781244591328, abs=1e-14)
    assert entropy_of_y(0.5) == pytest.approx(h2(0.25), abs=1e-14)


def test_entropy_is_binary_entropy_of_l2():
    for y in np.linspace(0, 1, 101):
        assert entropy_of_y(y) == pytest.approx(h2(y / 2), abs=1e-13)


def test_concurrence_and_negativity_values():
    assert concurrence_of_y(0.0) == 0.0
    assert concurrence_of_y(1.0) == 1.0
    assert concurrence_of_y(0.5) == pytest.approx(np.sqrt(3) / 2, abs=1e-15)
    assert concurrence_of_y(0.5) == pytest.approx(2 * np.sqrt(0.75 * 0.25), abs=1e-15)
    assert negativity_of_y(0.5) == concurrence_of_y(0.5)


@pytest.mark.parametrize("fn", [entropy_of_y, concurrence_of_y, negativity_of_y])
@pytest.mark.parametrize("bad", [-0.01, 1.01, np.nan])
def test_domain_errors(fn, bad):
    with pytest.raises(ValueError):
        fn(bad)


def test_measure_functions_vectorize():
    ys = np.linspace(0, 1, 5)
    for m in Measure:
        out = measure_of_y(m, ys)
        assert out.shape == ys.shape


def test_marginal_vector_examples():
    assert marginal_vector(basis_state([2, 2, 2], [0, 0, 0]), "Y").values == (0.0, 0.0, 0.0)
    np.testing.assert_allclose(marginal_vector(ghz(np.pi / 4), "Y").values, [1, 1, 1], atol=1e-12)
    a2, b2, c2 = 0.6, 0.3, 0.1
    amps = np.zeros(8)
    amps[[4, 2, 1]] = np.sqrt([a2, b2, c2])
    np.testing.assert_allclose(
        marginal_vector(make_state([2, 2, 2], amps), Measure.Y).values, [2 * (b2 + c2), 2 * b2, 2 * c2], atol=1e-12
    )


def test_marginal_vector_rejects_qudits():
    with pytest.raises(ValueError):
        marginal_vector(haar_random([2, 3], 0), "Y")


def test_entanglement_vector_domain():
    with pytest.raises(ValueError):
        EntanglementVector(Measure.Y, (0.5, 1.2))
    assert EntanglementVector("C", (1 + 1e-13,)).values == (1.0,)


def test_measure_agreement_on_random_states():
    for seed in range(300):
        s = haar_random([2] * 4, seed)
        c = marginal_vector(s, "C").values
        assert c == marginal_vector(s, "N").values
        for j in range(4):
            l1, l2 = schmidt_spectrum(s, j).lambdas
            assert c[j] == pytest.approx(2 * np.sqrt(l1 * l2), abs=1e-12)
            assert c[j] == pytest.approx(marginal_concurrence(s, j), abs=1e-10)


def test_monotone_concave_in_y():
    y = np.linspace(0, 1, 10_000)
    for m in (Measure.S, Measure.C, Measure.N):
        e = measure_of_y(m, y)
        assert np.diff(e).min() >= 0
        assert np.diff(e, 2).max() <= 1e-9


def test_two_qubit_symmetry():
    for seed in range(200):
        s = haar_random([2, 2], seed)
        for m in Measure:
            v = marginal_vector(s, m).values
            assert v[0] == pytest.approx(v[1], abs=1e-10)


@pytest.mark.parametrize(
    "lam, y",
    [((1, 0, 0), 0.0), ((1 / 3, 1 / 3, 1 / 3), 1.0), ((0.5, 0.25, 0.25), 0.75)],
)
def test_qudit_y(lam, y):
    assert qudit_y(spec(*lam), 3) == pytest.approx(y, abs=1e-12)


def test_qudit_y_reduces_to_qubit():
    for l2 in np.linspace(0, 0.5, 21):
        s = spec(1 - l2, l2)
        assert qudit_y(s, 2) == pytest.approx(y_measure(s), abs=1e-12)


def test_qudit_y_from_density_near_maximally_mixed():
    # the purity form loses half the digits here; the distance form does not
    for eps in (1e-6, 1e-10, 0.0):
        rho = np.diag([0.5 + eps, 0.5 - eps])
        assert qudit_y_from_density(rho) == pytest.approx(1 - 2 * eps, abs=1e-14)
    rho = np.eye(3) / 3
    assert qudit_y_from_density(rho) == 1.0
    assert abs(qudit_y_from_purity(np.sum(np.diag([0.5 + 1e-10, 0.5 - 1e-10]) ** 2), 2) - (1 - 2e-10)) < 1e-7


def test_qudit_y_from_density_batch():
    rng = np.random.default_rng(0)
    for M in (2, 3, 4):
        lam = rng.dirichlet(np.ones(M), 20)
        u = np.linalg.qr(rng.standard_normal((M, M)) + 1j * rng.standard_normal((M, M)))[0]
        rho = np.einsum("ab,tb,cb->tac", u, lam, u.conj())
        K = 1 / np.sum(lam**2, axis=1)
        np.testing.assert_allclose(qudit_y_from_density(rho), 1 - np.sqrt((M - K) / (K * (M - 1))), atol=1e-7)


def test_qudit_y_dimension_mismatch():
    with pytest.raises(ValueError):
        qudit_y(spec(0.5, 0.5), 3)


def test_pair_density_matches_loops():
    for seed in range(5):
        s = haar_random([2] * 4, seed)
        for j, k in [(0, 1), (1, 3), (3, 0), (2, 1)]:
            np.testing.assert_allclose(pair_density(s, j, k), pair_density_loops(s.amps, 4, j, k), atol=1e-14)


def test_pairwise_concurrence_examples():
    g = ghz(np.pi / 4)
    assert wootters_bruteforce(pair_density_loops(g.amps, 3, 0, 1)) == pytest.approx(0, abs=1e-12)
    assert pairwise_concurrence(g, 0, 1) == pytest.approx(0, abs=1e-12)
    w = w3()
    for j, k in [(0, 1), (0, 2), (1, 2)]:
        assert wootters_bruteforce(pair_density_loops(w.amps, 3, j, k)) == pytest.approx(2 / 3, abs=1e-12)
        assert pairwise_concurrence(w, j, k) == pytest.approx(2 / 3, abs=1e-10)
    assert pairwise_concurrence(basis_state([2, 2, 2], [0, 1, 0]), 0, 2) == 0.0


def test_pairwise_concurrence_matches_oracle_random():
    for seed in range(100):
        s = haar_random([2] * 3, seed)
        rho = pair_density_loops(s.amps, 3, 0, 2)
        # the oracle takes square roots of round-off eigenvalues, so agreement is ~1e-8
        assert pairwise_concurrence(s, 0, 2) == pytest.approx(wootters_bruteforce(rho), abs=1e-7)
        assert pairwise_concurrence(s, 0, 2) == pytest.approx(wootters_concurrence(rho), abs=1e-10)


def test_wootters_batch_matches_single():
    rhos = np.stack([pair_density(haar_random([2] * 3, s), 0, 1) for s in range(20)])
    np.testing.assert_allclose(wootters_concurrence(rhos), [wootters_concurrence(r) for r in rhos], atol=1e-13)


def test_pairwise_same_party():
    with pytest.raises(ValueError):
        pairwise_concurrence(w3(), 1, 1)


def test_negativity_and_eof_examples():
    prod = basis_state([2, 2], [0, 1])
    assert pairwise_negativity(prod, 0, 1) == pytest.approx(0, abs=1e-15)
    assert pairwise_eof(prod, 0, 1) == pytest.approx(0, abs=1e-12)
    bell = make_state([2, 2], [1, 0, 0, 1], renormalize=True)
    assert pairwise_negativity(bell, 0, 1) == pytest.approx(1, abs=1e-12)
    assert pairwise_eof(bell, 0, 1) == pytest.approx(1, abs=1e-7)
    # frozen from the brute-force concurrence 2/3 of the W pair
    assert pairwise_eof(w3(), 0, 1) == pytest.approx(0.5500477595827576, abs=1e-9)
    assert eof_of_concurrence(2 / 3) == pytest.approx(h2((1 + np.sqrt(1 - 4 / 9)) / 2), abs=1e-14)


def test_pure_pair_consistency():
    for seed in range(200):
        s = haar_random([2, 2], seed)
        y = y_measure(schmidt_spectrum(s, 0))
        assert pairwise_concurrence(s, 0, 1) == pytest.approx(concurrence_of_y(y), abs=1e-10)
        assert pairwise_negativity(s, 0, 1) == pytest.approx(negativity_of_y(y), abs=1e-10)


def test_pairwise_matrix_symmetric():
    m = pairwise_matrix(w3(), "C")
    np.testing.assert_allclose(m, m.T)
    np.testing.assert_allclose(m[~np.eye(3, dtype=bool)], 2 / 3, atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1))
def test_measures_bounded(y):
    for m in Measure:
        assert 0.0 <= measure_of_y(m, y) <= 1.0
    assert concurrence_of_y(y) >= y - 1e-15
