"""Majorization order, passive energies, and the two-level transfer."""

import itertools

import numpy as np
import pytest

from catalytic_erasure.majorization import (
    energy_via_partial_sums,
    majorizes,
    passive_energy,
    two_level_transfer,
)
from catalytic_erasure.qstate import EnergyLadder, shannon_entropy


def random_mixture(rng, p):
    # averaging permutations gives a majorized vector
    w = rng.dirichlet(np.ones(3))
    return sum(wi * p[rng.permutation(p.size)] for wi in w)


class TestMajorizes:
    def test_reflexive(self):
        assert majorizes([0.5, 0.3, 0.2], [0.5, 0.3, 0.2])

    def test_pure_state_majorizes_everything(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            q = rng.dirichlet(np.ones(3))
            assert majorizes([1.0, 0.0, 0.0], q)

    def test_hand_checked_prefix_sums(self):
        assert majorizes([0.5, 0.3, 0.2], [0.4, 0.35, 0.25])
        assert not majorizes([0.4, 0.35, 0.25], [0.5, 0.3, 0.2])

    def test_transitive_on_random_chains(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            p = rng.dirichlet(np.ones(5))
            q = random_mixture(rng, p)
            r = random_mixture(rng, q)
            assert majorizes(p, q) and majorizes(q, r)
            assert majorizes(p, r)

    def test_antisymmetric_up_to_sorting(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            p = rng.dirichlet(np.ones(4))
            q = p[rng.permutation(4)]
            assert majorizes(p, q) and majorizes(q, p)
            assert np.allclose(np.sort(p), np.sort(q))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            majorizes([0.5, 0.5], [0.4, 0.3, 0.3])

    def test_entropy_and_passive_energy_monotone(self):
        # the two Schur-monotone functionals move the right way
        rng = np.random.default_rng(29)
        for _ in range(50):
            p = rng.dirichlet(np.ones(5))
            q = random_mixture(rng, p)
            assert shannon_entropy(p) <= shannon_entropy(q) + 1e-12
            lad = EnergyLadder(np.sort(rng.uniform(0.0, 2.0, 5)))
            assert passive_energy(lad, p) <= passive_energy(lad, q) + 1e-12


class TestPassiveEnergy:
    def test_already_passive_is_dot_product(self):
        lad = EnergyLadder([0.0, 1.0, 2.0])
        p = [0.5, 0.3, 0.2]
        assert passive_energy(lad, p) == pytest.approx(np.dot(lad.levels, p))

    def test_two_level_inversion(self):
        lad = EnergyLadder([0.0, 1.0])
        assert passive_energy(lad, [0.1, 0.9]) == pytest.approx(0.1)

    def test_matches_brute_force(self):
        rng = np.random.default_rng(41)
        lad = EnergyLadder(np.sort(rng.uniform(0.0, 3.0, 5)))
        for _ in range(10):
            p = rng.dirichlet(np.ones(5))
            brute = min(
                np.dot(lad.levels, p[list(perm)])
                for perm in itertools.permutations(range(5))
            )
            assert passive_energy(lad, p) == pytest.approx(brute, abs=1e-14)


class TestEnergyViaPartialSums:
    def test_two_level_example(self):
        lad = EnergyLadder([0.0, 1.0])
        assert energy_via_partial_sums(lad, [0.8, 0.2]) == pytest.approx(0.2)

    def test_matches_dot_product_on_thermal(self):
        lad = EnergyLadder(np.arange(1.0, 5.0))
        p = np.exp(-1.1 * lad.levels)
        p /= p.sum()
        assert energy_via_partial_sums(lad, p) == pytest.approx(
            float(lad.levels @ p), abs=1e-14
        )

    def test_constant_ladder_degenerate(self):
        lad = EnergyLadder([0.7, 0.7, 0.7])
        assert energy_via_partial_sums(lad, [0.5, 0.3, 0.2]) == pytest.approx(0.7)

    def test_matches_dot_product_random(self):
        rng = np.random.default_rng(43)
        for _ in range(100):
            d = int(rng.integers(2, 8))
            lad = EnergyLadder(np.sort(rng.uniform(0.0, 4.0, d)))
            p = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            assert energy_via_partial_sums(lad, p) == pytest.approx(
                float(lad.levels @ p), abs=1e-12
            )

    def test_rejects_unsorted_input(self):
        lad = EnergyLadder([0.0, 1.0, 2.0])
        with pytest.raises(ValueError):
            energy_via_partial_sums(lad, [0.2, 0.5, 0.3])


class TestTwoLevelTransfer:
    def test_zero_amount_is_identity(self):
        q = [0.5, 0.3, 0.2]
        out = two_level_transfer(q, 2, 0, 0.0)
        assert np.allclose(out.probs, q)
        assert majorizes(out, q)

    def test_hand_example(self):
        out = two_level_transfer([0.5, 0.3, 0.2], 2, 0, 0.1)
        assert np.allclose(out.probs, [0.6, 0.3, 0.1])
        assert majorizes(out, [0.5, 0.3, 0.2])

    def test_transfer_toward_larger_always_majorizes(self):
        rng = np.random.default_rng(47)
        for _ in range(100):
            d = int(rng.integers(2, 7))
            q = rng.dirichlet(np.ones(d))
            j_to, j_from = np.argsort(q)[[-1, 0]]
            if q[j_to] <= q[j_from]:
                continue
            amount = rng.uniform(0.0, q[j_from])
            out = two_level_transfer(q, int(j_from), int(j_to), amount)
            assert majorizes(out, q)

    def test_rejects_overdraw(self):
        with pytest.raises(ValueError):
            two_level_transfer([0.5, 0.3, 0.2], 2, 0, 0.3)

    def test_rejects_same_level(self):
        with pytest.raises(ValueError):
            two_level_transfer([0.5, 0.5], 1, 1, 0.1)
