"""Brute-force and sampling oracles: determinism and small closed forms."""

import math

import numpy as np
import pytest

from catalytic_erasure.oracle import (
    brute_force_best_marginal,
    matrix_exp,
    random_correlated_joint,
    random_unitary,
)
from catalytic_erasure.catalyst import find_witnesses
from catalytic_erasure.qstate import (
    EnergyLadder,
    mutual_information,
    shannon_entropy,
    thermal_state,
)


class TestBruteForceBestMarginal:
    def test_qubit_pair_swap_is_optimal(self):
        lad = EnergyLadder([0.0, 1.0])
        p_s = thermal_state(lad, 0.4).probs
        p_e = thermal_state(lad, 1.5).probs
        spectrum = np.outer(p_s, p_e).ravel()
        best, _ = brute_force_best_marginal(spectrum, 2, 2)
        # swapping marginals concentrates the system onto the env populations
        assert best == pytest.approx(shannon_entropy(p_e), abs=1e-12)

    def test_degenerate_spectrum_all_tie(self):
        spectrum = np.full(4, 0.25)
        best, _ = brute_force_best_marginal(spectrum, 2, 2)
        assert best == pytest.approx(math.log(2), abs=1e-12)

    def test_deterministic(self):
        rng = np.random.default_rng(101)
        spectrum = rng.dirichlet(np.ones(6))
        a = brute_force_best_marginal(spectrum, 2, 3)
        b = brute_force_best_marginal(spectrum, 2, 3)
        assert a[0] == b[0] and tuple(a[1]) == tuple(b[1])

    def test_dimension_cap(self):
        with pytest.raises(ValueError):
            brute_force_best_marginal(np.full(12, 1 / 12), 3, 4)

    def test_min_heat_objective(self):
        lad = EnergyLadder([1.0, 2.0])
        rng = np.random.default_rng(5)
        spectrum = rng.dirichlet(np.ones(4))
        best, perm = brute_force_best_marginal(
            spectrum, 2, 2, objective="min_heat", ladder=lad
        )
        assert np.isfinite(best)


class TestRandomUnitary:
    def test_unitarity(self):
        u = random_unitary(5, seed=1)
        assert np.max(np.abs(u @ u.conj().T - np.eye(5))) < 1e-12

    def test_deterministic_per_seed(self):
        assert np.array_equal(random_unitary(4, seed=9), random_unitary(4, seed=9))
        assert not np.allclose(random_unitary(4, seed=9), random_unitary(4, seed=10))


class TestMatrixExp:
    def test_zero_time_identity(self):
        h = np.array([[1.0, 0.3], [0.3, 2.0]])
        assert np.allclose(matrix_exp(h, 0.0), np.eye(2), atol=1e-14)

    def test_resonant_block_matches_rabi_rotation(self):
        # 2x2 degenerate block: exp(-iHt) = phase * (cos g t - i sin g t sx)
        e0, g, t = 2.0, 0.8, 1.3
        h = np.array([[e0, g], [g, e0]])
        u = matrix_exp(h, t)
        phase = np.exp(-1j * e0 * t)
        expected = phase * np.array(
            [
                [np.cos(g * t), -1j * np.sin(g * t)],
                [-1j * np.sin(g * t), np.cos(g * t)],
            ]
        )
        assert np.max(np.abs(u - expected)) < 1e-12

    def test_unitary_output(self):
        rng = np.random.default_rng(15)
        a = rng.normal(size=(4, 4))
        h = (a + a.T) / 2
        u = matrix_exp(h, 2.1)
        assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-12


class TestRandomCorrelatedJoint:
    def test_product_mode_has_zero_mi(self):
        j = random_correlated_joint(3, 3, seed=4, correlated=False)
        assert abs(mutual_information(j)) < 1e-14

    def test_correlated_mode_has_witnesses(self):
        j = random_correlated_joint(3, 3, seed=4, correlated=True)
        assert mutual_information(j) > 0.01
        assert find_witnesses(j)

    def test_deterministic_per_seed(self):
        a = random_correlated_joint(2, 4, seed=8)
        b = random_correlated_joint(2, 4, seed=8)
        assert np.array_equal(a.populations, b.populations)

    def test_full_rank(self):
        j = random_correlated_joint(4, 4, seed=12)
        assert np.min(j.populations) > 0.0
