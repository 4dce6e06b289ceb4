import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from design_forge import (DesignError, MuGetfFamily, NotEquidistant, Violation, construct_mu_getf, equidistance,
                          gell_mann_set, index_of_coincidence, partition_set, reduced_linear_independence,
                          s_range, verify_mu_getf)
from design_forge.corpus import random_mu_getf, random_perturbed_mu_getf
from design_forge.linalg import random_density_matrix
from design_forge.mugetf import b_from_S

from conftest import mub_qubit_groups


def overlap_table(ops):
    return np.array([[np.trace(p @ q).real for q in ops] for p in ops])


# verification

def test_three_qubit_mubs():
    groups = mub_qubit_groups()
    fam = verify_mu_getf(groups)
    assert fam.N == 3
    assert fam.sizes == (2, 2, 2)
    for g in fam.groups:
        p = g.params
        assert (p.gamma, p.a, p.b, p.c) == pytest.approx((1, 1, 1, 0), abs=1e-12)
    assert fam.f == pytest.approx(0.5, abs=1e-12)
    assert fam.S_values == pytest.approx((1, 1, 1), abs=1e-12)
    assert fam.is_maximal
    # brute-force table: 1 on the diagonal, 0 within a pair, 1/2 across pairs
    t = overlap_table(np.concatenate(groups))
    same_pair = np.kron(np.eye(3), np.ones((2, 2)))
    expected = np.where(same_pair == 1, np.eye(6), 0.5)
    assert np.allclose(t, expected, atol=1e-12)


def test_single_group_reduces_to_getf():
    fam = verify_mu_getf(mub_qubit_groups()[:1])
    assert fam.N == 1
    assert fam.f == 0.5


def test_mismatched_gammas():
    fam = verify_mu_getf(mub_qubit_groups((1.0, 2.0, 1.0))[:2])
    assert fam.Gamma == pytest.approx(3, abs=1e-12)
    assert fam.f == pytest.approx(0.5, abs=1e-12)


def test_not_unbiased_detected():
    g = mub_qubit_groups()
    rot = np.array([[np.cos(0.3), -np.sin(0.3)], [np.sin(0.3), np.cos(0.3)]])
    tilted = np.array([rot @ p @ rot.T for p in g[2]])
    v = verify_mu_getf([g[0], tilted])
    assert isinstance(v, Violation) and v.code == "NOT-UNBIASED"


def test_group_violation_is_prefixed():
    g = mub_qubit_groups()
    bad = g[1].copy()
    bad[0] = bad[0] * 1.2
    v = verify_mu_getf([g[0], bad])
    assert isinstance(v, Violation)
    assert v.indices[0] == 1


# admissible S

@pytest.mark.parametrize("d,M,gammas,upper", [
    (2, [2, 2, 2], [1, 1, 1], 1.0),
    (2, [2, 3], [1, 1], 1 / 3),
    (3, [9], [1], 1 / 12),
])
def test_s_range_table(d, M, gammas, upper):
    assert s_range(d, M, gammas) == (0.0, upper)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4), st.data())
def test_b_from_S_inverts_distance_formula(d, data):
    M = data.draw(st.integers(2, d * d))
    gamma = data.draw(st.floats(0.5, 2.0))
    upper = s_range(d, [M], [gamma])[1]
    S = data.draw(st.floats(1e-6, upper))
    b = b_from_S(d, M, gamma, S)
    a = d * gamma / M
    c = (M - d * b) / (d * (M - 1))
    assert a**2 * (b - c) == pytest.approx(S, rel=1e-10)
    # S at the bound keeps b admissible
    assert 1 / d < b <= min(d, M) / d * (1 + 1e-12)


# construction

def test_construct_three_mubs_from_pauli():
    part = partition_set(gell_mann_set(2), [2, 2, 2])
    fam = construct_mu_getf(part, [1, 1, 1], 1.0)
    for g in fam.groups:
        assert g.params.b == pytest.approx(1.0, abs=1e-12)
        assert all(np.linalg.matrix_rank(e, tol=1e-10) == 1 for e in g.elements)
    assert equidistance(fam) == pytest.approx(1.0, abs=1e-12)


def test_construct_maximal_qubit_family():
    part = partition_set(gell_mann_set(2), [2, 3])
    fam = construct_mu_getf(part, [1, 1], 0.3)
    assert fam.is_maximal and sum(fam.sizes) == 5
    assert not isinstance(verify_mu_getf([g.elements for g in fam.groups]), Violation)
    assert equidistance(fam) == pytest.approx(0.3, abs=1e-12)


@pytest.mark.parametrize("S", [0.34, 0.0, -0.1])
def test_construct_s_range(S):
    part = partition_set(gell_mann_set(2), [2, 3])
    with pytest.raises(DesignError) as err:
        construct_mu_getf(part, [1, 1], S)
    assert err.value.code == "S-RANGE"


# equidistance

def test_equidistance_perturbed():
    fam, alpha, shift = random_perturbed_mu_getf(2, [2, 3], 4)
    res = equidistance(fam)
    assert isinstance(res, NotEquidistant) and not res
    assert res.spread > 1e-3
    assert abs(shift) == 0.05


def test_equidistance_single_group():
    fam = random_mu_getf(2, [4], 3)
    assert equidistance(fam) == pytest.approx(fam.S_values[0])


@pytest.mark.parametrize("seed", range(10))
def test_distance_matches_pairwise_frobenius(seed):
    fam = random_mu_getf(3, [3, 3, 3, 3], seed)
    S = equidistance(fam)
    for g in fam.groups:
        e = g.elements
        for k in range(len(e)):
            for l in range(k + 1, len(e)):
                assert 0.5 * np.linalg.norm(e[k] - e[l]) ** 2 == pytest.approx(S, rel=1e-9)


# index of coincidence

def test_ioc_three_mubs_pure_state():
    fam = verify_mu_getf(mub_qubit_groups())
    rep = index_of_coincidence(fam, np.diag([1.0, 0.0]))
    probs = np.sort(np.concatenate(rep.probabilities))
    assert np.allclose(probs, np.sort([1 / 6, 1 / 6, 1 / 6, 1 / 6, 1 / 3, 0]), atol=1e-12)
    assert rep.C == pytest.approx(2 / 9, abs=1e-12)
    assert rep.predicted_C == pytest.approx(2 / 9, abs=1e-12)


def test_ioc_maximally_mixed_equals_mu_prime():
    fam = random_mu_getf(3, [3, 3, 3, 3], 1)
    rep = index_of_coincidence(fam, np.eye(3) / 3)
    assert rep.C == pytest.approx(fam.mu / fam.Gamma**2, abs=1e-14)


@pytest.mark.parametrize("d,sizes", [(2, [2, 3]), (2, [2, 2, 2]), (3, [3, 3, 3, 3]), (3, [5, 5])])
def test_ioc_law_brute_force(d, sizes):
    fam = random_mu_getf(d, sizes, 7)
    S = equidistance(fam)
    r = np.random.default_rng(99)
    for _ in range(20):
        rho = random_density_matrix(d, r)
        # oracle: direct overlaps, no shared code path
        p = np.array([np.trace(e @ rho).real for e in fam.elements]) / fam.Gamma
        assert p.sum() == pytest.approx(1, abs=1e-12)
        C = (p**2).sum()
        law = S / fam.Gamma**2 * (np.trace(rho @ rho).real - 1 / d) + fam.mu / fam.Gamma**2
        assert abs(C - law) <= 1e-10
        rep = index_of_coincidence(fam, rho)
        assert rep.C == pytest.approx(C, abs=1e-14)
        assert rep.residual <= 1e-10
        for g, pa in zip(fam.groups, rep.probabilities):
            assert pa.sum() == pytest.approx(g.params.gamma / fam.Gamma, abs=1e-12)


def test_ioc_requires_equidistance():
    fam, _, _ = random_perturbed_mu_getf(2, [2, 3], 0)
    with pytest.raises(DesignError) as err:
        index_of_coincidence(fam, np.eye(2) / 2)
    assert err.value.code == "NOT-EQUIDISTANT"


# structure

def test_reduced_rank_three_mubs():
    rep = reduced_linear_independence(verify_mu_getf(mub_qubit_groups()))
    assert (rep.size, rep.rank) == (4, 4) and rep.ok


def test_reduced_rank_qutrit_maximal():
    rep = reduced_linear_independence(random_mu_getf(3, [3, 3, 3, 3], 5))
    assert (rep.size, rep.rank) == (9, 9)


def test_reduced_rank_duplicated_group_is_deficient():
    fam = verify_mu_getf(mub_qubit_groups())
    dup = MuGetfFamily(2, fam.groups[:2] + fam.groups[:1], fam.f, fam.Gamma, fam.S_values, fam.mu)
    rep = reduced_linear_independence(dup)
    assert rep.size == 4 and rep.rank == 3 and not rep.ok


@pytest.mark.parametrize("d,sizes", [(2, [2, 3]), (2, [3, 2]), (3, [2, 8]), (3, [4, 4, 3])])
def test_family_invariants(d, sizes):
    for seed in range(5):
        fam = random_mu_getf(d, sizes, seed)
        assert fam.f == pytest.approx(1 / d, abs=1e-10)
        assert np.abs(fam.elements.sum(axis=0) - fam.Gamma * np.eye(d)).max() <= 1e-10
        assert 2 * fam.N <= sum(fam.sizes) <= d * d + fam.N - 1
        for g in fam.groups:
            p = g.params
            assert p.c - fam.f == pytest.approx(-(p.b - p.c) / p.M, abs=1e-12)
        assert reduced_linear_independence(fam).rank == d * d


def test_cardinality_lower_bound():
    g = mub_qubit_groups()
    # one group of a single element is not a frame
    v = verify_mu_getf([g[0], g[1][:1]])
    assert isinstance(v, Violation)
