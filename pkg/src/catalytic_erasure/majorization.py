"""Majorization order and passive-energy bounds for finite environments.

p majorizes q when every descending prefix sum of p dominates the matching
prefix of q.  For erasure bookkeeping the relevant consequence is twofold:
majorization forces the entropy down (Schur concavity) and, against a ladder
sorted ascending, it bounds the energy of any state with the given spectrum
from below by the passive arrangement.
"""

from __future__ import annotations

import numpy as np

from .qstate import EnergyLadder, ProbDist, _as_probs

__all__ = [
    "majorizes",
    "passive_energy",
    "energy_via_partial_sums",
    "two_level_transfer",
]

# prefix-sum comparisons are absolute; probabilities are O(1)
MAJ_EPS = 1e-12


def majorizes(p, q, eps: float = MAJ_EPS) -> bool:
    """True when p majorizes q: descending prefix sums of p dominate q's.

    Both vectors must have equal length and equal total (checked to 1e-9);
    comparisons allow `eps` of absolute slack per prefix.
    """
    a = np.sort(_as_probs(p))[::-1]
    b = np.sort(_as_probs(q))[::-1]
    if a.size != b.size:
        raise ValueError("majorization needs equal-length vectors")
    if abs(a.sum() - b.sum()) > 1e-9:
        raise ValueError("majorization needs equal totals")
    return bool(np.all(np.cumsum(a) >= np.cumsum(b) - eps))


def passive_energy(ladder: EnergyLadder, p) -> float:
    """Least energy among states with the spectrum of p on this ladder.

    Achieved by pairing populations descending with levels ascending.
    """
    v = _as_probs(p)
    if v.size != ladder.dim:
        raise ValueError("state dimension does not match ladder")
    return float(np.sort(v)[::-1] @ ladder.levels)


def energy_via_partial_sums(ladder: EnergyLadder, p_desc) -> float:
    """Passive energy written through prefix sums against level gaps.

    With P_k = p_1 + ... + p_k and eps sorted ascending,

        E = eps_d - sum_{k<d} (eps_{k+1} - eps_k) P_k

    which telescopes back to sum eps_j p_j.  Requires `p_desc` already
    sorted descending; this form makes the energy manifestly monotone under
    majorization (larger prefixes, lower energy).
    """
    v = _as_probs(p_desc)
    if v.size != ladder.dim:
        raise ValueError("state dimension does not match ladder")
    if np.any(np.diff(v) > 1e-15):
        raise ValueError("populations must be sorted descending")
    gaps = np.diff(ladder.levels)
    prefixes = np.cumsum(v)[:-1]
    return float(ladder.levels[-1] * v.sum() - gaps @ prefixes)


def two_level_transfer(p, j_from: int, j_to: int, amount: float) -> ProbDist:
    """Move probability `amount` from level j_from to j_to.

    The transfer must leave every entry in [0, 1]; amount may be any sign.
    """
    v = _as_probs(p).copy()
    if not (0 <= j_from < v.size and 0 <= j_to < v.size):
        raise ValueError("level index out of range")
    if j_from == j_to:
        raise ValueError("transfer needs two distinct levels")
    v[j_from] -= amount
    v[j_to] += amount
    if v[j_from] < -1e-15 or v[j_to] > 1.0 + 1e-15:
        raise ValueError(
            f"transfer of {amount:.3e} drives populations outside [0, 1]"
        )
    return ProbDist(v)
