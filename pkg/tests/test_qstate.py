"""State containers, entropies, thermal states, and the heat identity."""

import math

import numpy as np
import pytest

from catalytic_erasure.qstate import (
    EnergyLadder,
    JointState,
    ProbDist,
    fit_beta,
    heat,
    landauer_decomposition,
    mutual_information,
    partial_trace,
    relative_entropy,
    shannon_entropy,
    thermal_state,
    thermal_state_with_entropy,
    vn_entropy,
)
from catalytic_erasure.oracle import random_unitary


def entropy_loop(p):
    # independent summation oracle
    return -sum(v * math.log(v) for v in p if v > 0)


def relent_loop(p, q):
    return sum(v * math.log(v / w) for v, w in zip(p, q) if v > 0)


class TestProbDist:
    def test_renormalizes_small_drift(self):
        p = ProbDist([0.5, 0.5 + 3e-10])
        assert abs(p.probs.sum() - 1.0) < 1e-15

    def test_rejects_large_drift(self):
        with pytest.raises(ValueError):
            ProbDist([0.5, 0.6])

    def test_clips_tiny_negative(self):
        p = ProbDist([1.0, -1e-13])
        assert p[1] == 0.0

    def test_rejects_real_negative(self):
        with pytest.raises(ValueError):
            ProbDist([1.1, -0.1])

    def test_descending_is_stable(self):
        p = ProbDist([0.25, 0.25, 0.5])
        assert np.array_equal(p.descending(), [0.5, 0.25, 0.25])


class TestEnergyLadder:
    def test_rejects_decreasing_levels(self):
        with pytest.raises(ValueError):
            EnergyLadder([1.0, 0.5])

    def test_energy_dot_product(self):
        lad = EnergyLadder([0.0, 1.0, 2.0])
        assert lad.energy([0.5, 0.3, 0.2]) == pytest.approx(0.7)


class TestShannonEntropy:
    def test_uniform_qubit(self):
        assert shannon_entropy([0.5, 0.5]) == pytest.approx(math.log(2), abs=1e-15)

    def test_pure_state(self):
        assert shannon_entropy([1.0, 0.0, 0.0]) == 0.0

    def test_three_level_value(self):
        p = [0.7, 0.2, 0.1]
        assert shannon_entropy(p) == pytest.approx(0.801819, abs=1e-6)
        assert shannon_entropy(p) == pytest.approx(entropy_loop(p), abs=1e-15)

    def test_schur_concavity(self):
        # mixing by random permutations can only raise entropy
        rng = np.random.default_rng(11)
        for _ in range(50):
            d = int(rng.integers(2, 7))
            p = rng.uniform(0.05, 1.0, d)
            p /= p.sum()
            w = rng.dirichlet(np.ones(4))
            q = sum(wi * p[rng.permutation(d)] for wi in w)
            assert shannon_entropy(p) <= shannon_entropy(q) + 1e-12


class TestRelativeEntropy:
    def test_identical_states(self):
        assert relative_entropy([0.3, 0.7], [0.3, 0.7]) == 0.0

    def test_pure_vs_uniform(self):
        assert relative_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2))

    def test_frozen_value(self):
        p, q = [0.6, 0.4], [0.5, 0.5]
        assert relative_entropy(p, q) == pytest.approx(0.020136, abs=1e-6)
        assert relative_entropy(p, q) == pytest.approx(relent_loop(p, q), abs=1e-15)

    def test_support_escape_is_infinite(self):
        assert relative_entropy([0.5, 0.5], [1.0, 0.0]) == math.inf

    def test_nonnegative_on_random_pairs(self):
        rng = np.random.default_rng(3)
        for _ in range(100):
            p = rng.dirichlet(np.ones(5))
            q = rng.dirichlet(np.ones(5))
            assert relative_entropy(p, q) >= 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            relative_entropy([1.0], [0.5, 0.5])


class TestThermalState:
    def test_beta_zero_uniform(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        assert np.allclose(thermal_state(lad, 0.0).probs, 1.0 / 3.0)

    def test_uniform_ladder_constant_ratio(self):
        omega, beta = 0.7, 1.3
        lad = EnergyLadder(omega * np.arange(1, 6))
        p = thermal_state(lad, beta).probs
        assert np.allclose(p[:-1] / p[1:], math.exp(beta * omega), rtol=1e-12)

    def test_two_level_closed_form(self):
        p = thermal_state(EnergyLadder([0.0, 1.0]), math.log(3.0))
        assert np.allclose(p.probs, [0.75, 0.25], atol=1e-15)

    def test_rejects_negative_beta(self):
        with pytest.raises(ValueError):
            thermal_state(EnergyLadder([0.0, 1.0]), -0.1)


class TestThermalStateWithEntropy:
    def test_max_entropy_gives_uniform(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        beta, p = thermal_state_with_entropy(lad, math.log(3.0))
        assert abs(beta) < 1e-6
        assert np.allclose(p.probs, 1.0 / 3.0, atol=1e-8)

    def test_round_trip_beta(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        target = shannon_entropy(thermal_state(lad, 1.0))
        beta, _ = thermal_state_with_entropy(lad, target)
        assert beta == pytest.approx(1.0, abs=1e-8)

    def test_round_trip_random_ladders(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            d = int(rng.integers(2, 7))
            lad = EnergyLadder(np.sort(rng.uniform(0.0, 2.0, d)) + rng.uniform(0, 1))
            if np.min(np.diff(lad.levels)) < 1e-3:
                continue
            beta0 = rng.uniform(0.1, 4.0)
            target = shannon_entropy(thermal_state(lad, beta0))
            beta, p = thermal_state_with_entropy(lad, target)
            assert beta == pytest.approx(beta0, abs=1e-7)
            assert shannon_entropy(p) == pytest.approx(target, abs=1e-10)

    def test_rejects_out_of_range_target(self):
        lad = EnergyLadder([0.0, 1.0])
        with pytest.raises(ValueError):
            thermal_state_with_entropy(lad, math.log(2.0) + 0.01)
        with pytest.raises(ValueError):
            thermal_state_with_entropy(lad, 0.0)


class TestHeat:
    def test_no_change_no_heat(self):
        lad = EnergyLadder([0.0, 1.0])
        assert heat(lad, [0.4, 0.6], [0.4, 0.6]) == 0.0

    def test_two_level_swap(self):
        omega = 1.7
        lad = EnergyLadder([0.0, omega])
        p1, p2 = 0.8, 0.2
        assert heat(lad, [p2, p1], [p1, p2]) == pytest.approx(omega * (p1 - p2))

    def test_heating_to_half_beta_is_positive(self):
        lad = EnergyLadder(np.arange(1.0, 5.0))
        hot = thermal_state(lad, 0.6)
        cold = thermal_state(lad, 1.2)
        assert heat(lad, hot, cold) > 0.0

    def test_offset_independence(self):
        rng = np.random.default_rng(5)
        levels = np.sort(rng.uniform(0, 3, 4))
        f, i = rng.dirichlet(np.ones(4)), rng.dirichlet(np.ones(4))
        q0 = heat(EnergyLadder(levels), f, i)
        q1 = heat(EnergyLadder(levels + 2.5), f, i)
        assert q0 == pytest.approx(q1, abs=1e-12)


class TestFitBeta:
    def test_recovers_known_beta(self):
        lad = EnergyLadder([1.0, 2.0, 3.0, 4.0])
        beta = fit_beta(lad, thermal_state(lad, 0.8))
        assert beta == pytest.approx(0.8, abs=1e-10)

    def test_rejects_non_thermal(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        with pytest.raises(ValueError):
            fit_beta(lad, ProbDist([0.5, 0.2, 0.3]))


class TestJointState:
    def test_classical_marginals(self):
        j = JointState((2, 2), np.array([[0.4, 0.1], [0.2, 0.3]]))
        assert j.is_classical
        assert np.allclose(j.marginal(0).probs, [0.5, 0.5])
        assert np.allclose(j.marginal(1).probs, [0.6, 0.4])

    def test_dense_diagonal_must_match(self):
        pop = np.array([[0.5, 0.0], [0.0, 0.5]])
        bad = np.diag([0.4, 0.1, 0.1, 0.4]).astype(complex)
        with pytest.raises(ValueError):
            JointState((2, 2), pop, bad)

    def test_dense_must_be_hermitian(self):
        pop = np.full((2, 2), 0.25)
        mat = np.diag([0.25] * 4).astype(complex)
        mat[0, 1] = 0.1j
        with pytest.raises(ValueError):
            JointState((2, 2), pop, mat)

    def test_dense_must_be_psd(self):
        pop = np.array([[0.5, 0.0], [0.0, 0.5]])
        mat = np.diag([0.5, 0.0, 0.0, 0.5]).astype(complex)
        mat[0, 3] = mat[3, 0] = 0.6
        with pytest.raises(ValueError):
            JointState((2, 2), pop, mat)

    def test_dense_marginal_matches_classical(self):
        pop = np.array([[0.4, 0.1], [0.2, 0.3]])
        j = JointState((2, 2), pop, np.diag(pop.ravel()).astype(complex))
        assert np.allclose(np.real(np.diag(j.marginal_matrix(1))), [0.6, 0.4])


class TestPartialTrace:
    def test_product_state_factors(self):
        rng = np.random.default_rng(9)
        a = rng.dirichlet(np.ones(2))
        b = rng.dirichlet(np.ones(3))
        mat = np.kron(np.diag(a), np.diag(b)).astype(complex)
        assert np.allclose(partial_trace(mat, (2, 3), 0), np.diag(a))
        assert np.allclose(partial_trace(mat, (2, 3), 1), np.diag(b))

    def test_keep_pair_of_axes(self):
        rng = np.random.default_rng(13)
        p = rng.dirichlet(np.ones(8)).reshape(2, 2, 2)
        mat = np.diag(p.ravel()).astype(complex)
        out = partial_trace(mat, (2, 2, 2), (0, 2))
        assert np.allclose(np.real(np.diag(out)), p.sum(axis=1).ravel())


class TestVnEntropy:
    def test_matches_shannon_on_diagonal(self):
        p = [0.7, 0.2, 0.1]
        assert vn_entropy(np.diag(p)) == pytest.approx(shannon_entropy(p), abs=1e-12)

    def test_unitary_invariance(self):
        p = np.diag([0.5, 0.3, 0.2]).astype(complex)
        u = random_unitary(3, seed=21)
        assert vn_entropy(u @ p @ u.conj().T) == pytest.approx(
            vn_entropy(p), abs=1e-12
        )


class TestMutualInformation:
    def test_product_is_zero(self):
        j = JointState((2, 3), np.outer([0.6, 0.4], [0.5, 0.3, 0.2]))
        assert abs(mutual_information(j)) < 1e-14

    def test_perfect_correlation(self):
        j = JointState((2, 2), np.array([[0.5, 0.0], [0.0, 0.5]]))
        assert mutual_information(j) == pytest.approx(math.log(2), abs=1e-12)

    def test_dense_agrees_with_classical_when_diagonal(self):
        pop = np.array([[0.4, 0.1], [0.2, 0.3]])
        jc = JointState((2, 2), pop)
        jd = JointState((2, 2), pop, np.diag(pop.ravel()).astype(complex))
        assert mutual_information(jd) == pytest.approx(
            mutual_information(jc), abs=1e-12
        )


class TestLandauerDecomposition:
    def test_identity_evolution_all_zero(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        rho_e = thermal_state(lad, 1.0)
        rho_s = ProbDist([0.5, 0.5])
        after = JointState((2, 3), np.outer(rho_s.probs, rho_e.probs))
        rec = landauer_decomposition(lad, rho_e, after, rho_s)
        for term in (rec.dSs, rec.dSe, rec.Qe, rec.Ise, rec.relent):
            assert abs(term) < 1e-12
        assert rec.identity_residual < 1e-12

    def test_full_swap_reduces_to_relative_entropy(self):
        # qubit pair: after swapping, correlation is zero and the heat
        # identity collapses to beta Qe = -dSs + S(rho_s || rho_e)
        lad = EnergyLadder([0.0, 1.0])
        beta = 1.1
        rho_e = thermal_state(lad, beta)
        rho_s = ProbDist([0.5, 0.5])
        after = JointState((2, 2), np.outer(rho_e.probs, rho_s.probs))
        rec = landauer_decomposition(lad, rho_e, after, rho_s)
        assert abs(rec.Ise) < 1e-12
        assert rec.relent == pytest.approx(
            relative_entropy(rho_s, rho_e), abs=1e-12
        )
        assert rec.identity_residual < 1e-12
        assert beta * rec.Qe == pytest.approx(
            -rec.dSs + relative_entropy(rho_s, rho_e), abs=1e-10
        )

    def test_random_unitary_identity_residual(self):
        rng = np.random.default_rng(31)
        lad = EnergyLadder(np.sort(rng.uniform(0.0, 2.0, 3)))
        rho_e = thermal_state(lad, 1.4)
        rho_s = ProbDist(rng.dirichlet(np.ones(2)))
        rho0 = np.kron(np.diag(rho_s.probs), np.diag(rho_e.probs)).astype(complex)
        u = random_unitary(6, seed=77)
        mat = u @ rho0 @ u.conj().T
        after = JointState((2, 3), np.real(np.diag(mat)).reshape(2, 3), mat)
        rec = landauer_decomposition(lad, rho_e, after, rho_s)
        assert rec.identity_residual < 1e-10

    def test_rejects_non_thermal_environment(self):
        lad = EnergyLadder([1.0, 2.0, 3.0])
        rho_s = ProbDist([0.5, 0.5])
        rho_e = ProbDist([0.5, 0.1, 0.4])
        after = JointState((2, 3), np.outer(rho_s.probs, rho_e.probs))
        with pytest.raises(ValueError):
            landauer_decomposition(lad, rho_e, after, rho_s)
