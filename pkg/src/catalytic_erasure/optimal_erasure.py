"""Optimal erasure with finite environments: when sorting is achievable.

The best any joint unitary can do for erasure is pick the permutation of
the joint spectrum that minimizes the system's marginal entropy.  For a
product input rho_s x rho_e that optimum has a clean block structure
whenever the marginal ratio ladders are commensurate: sort all d_s * d_e
products descending, hand the n-th block of d_e of them to system level n,
and the result factorizes as sigma_s x sigma_e again.  The checkers here
decide when that holds, build the permutation, verify the factorization
numerically, and bound what erasure and heat are reachable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import (
    EnergyLadder,
    ProbDist,
    _as_probs,
    fit_beta,
    heat,
    shannon_entropy,
    thermal_state_with_entropy,
)

__all__ = [
    "CommensurabilityReport",
    "BlockPermutation",
    "check_commensurate",
    "build_block_sort",
    "max_erasure_bound",
    "check_geometric_interleaving",
    "min_heat",
]

# ratio periodicity comparisons, relative
RATIO_TOL = 1e-10
# product-form verification after the block sort, absolute on conditionals
PRODUCT_TOL = 1e-12


def _sorted_full_rank(p, name: str) -> np.ndarray:
    v = _as_probs(p)
    if np.any(v <= 0.0):
        raise ValueError(
            f"{name} must be full rank; a zero population makes some joint"
            " ratio diverge"
        )
    return np.sort(v)[::-1]


def _ratios(v: np.ndarray) -> np.ndarray:
    return v[:-1] / v[1:]


def _periodic(r: np.ndarray, m: int, tol: float) -> bool:
    """r_{j+lam*m} == r_j for every lambda keeping indices in range."""
    n = r.size
    lam = 1
    while lam * m < n:
        a, b = r[lam * m:], r[: n - lam * m]
        if np.max(np.abs(a - b) / b) > tol:
            return False
        lam += 1
    return True


@dataclass
class CommensurabilityReport:
    """Outcome of the commensurability test for a marginal pair.

    `condition` is "i" (environment divides into d_s periodic blocks),
    "ii" (system divides into d_e periodic blocks), or "none".  `m` is the
    block count of whichever condition holds.  `periodic_ratios` is the
    ratio sequence that was checked for that condition (None for "none").
    """

    premise_ok: bool
    condition: str
    m: int | None
    cond_i: bool
    cond_ii: bool
    ratios_s: np.ndarray
    ratios_e: np.ndarray
    periodic_ratios: np.ndarray | None


def check_commensurate(p_s, p_e, tol: float = RATIO_TOL) -> CommensurabilityReport:
    """Decide whether the block-sorting construction applies to (p_s, p_e).

    Both inputs are sorted descending internally; everything downstream
    works in that sorted frame.  The premise asks the environment ladder to
    be at least as steep everywhere as the system's extreme ratio:
    p_j^e / p_{j+1}^e >= p_1^s / p_{d_s}^s for all j.  Condition i needs
    d_e = m * d_s with the environment ratios m-periodic; condition ii
    needs d_s = m * d_e with the system ratios d_e-periodic.
    """
    s = _sorted_full_rank(p_s, "p_s")
    e = _sorted_full_rank(p_e, "p_e")
    d_s, d_e = s.size, e.size
    r_s, r_e = _ratios(s), _ratios(e)
    extreme = s[0] / s[-1]
    premise_ok = bool(np.all(r_e >= extreme * (1.0 - 1e-12))) if r_e.size else True

    cond_i = d_s > 0 and d_e % d_s == 0 and _periodic(r_e, d_e // d_s, tol)
    cond_ii = d_e > 0 and d_s % d_e == 0 and _periodic(r_s, d_e, tol)
    if cond_i:
        condition, m, checked = "i", d_e // d_s, r_e
    elif cond_ii:
        condition, m, checked = "ii", d_s // d_e, r_s
    else:
        condition, m, checked = "none", None, None
    return CommensurabilityReport(
        premise_ok=premise_ok,
        condition=condition,
        m=m,
        cond_i=cond_i,
        cond_ii=cond_ii,
        ratios_s=r_s,
        ratios_e=r_e,
        periodic_ratios=checked,
    )


@dataclass
class BlockPermutation:
    """Rank-to-label bookkeeping for the block-sorting permutation.

    assignment[k] is the (i_s, j_e) label receiving the rank-k sorted joint
    eigenvalue; the block invariant forces i_s = k // d_e, so ranks
    n*d_e .. (n+1)*d_e - 1 land on system level n.  sources[k] is the label
    the rank-k eigenvalue came from in the sorted-marginal product frame,
    which is what makes the object an applicable permutation rather than
    just a shape statement.
    """

    d_s: int
    d_e: int
    assignment: tuple
    sources: tuple

    def __post_init__(self) -> None:
        n = self.d_s * self.d_e
        for name in ("assignment", "sources"):
            pairs = tuple((int(i), int(j)) for i, j in getattr(self, name))
            if len(pairs) != n:
                raise ValueError(f"{name} must cover the full product basis")
            if len(set(pairs)) != n:
                raise ValueError(f"{name} is not a bijection")
            for k, (i, j) in enumerate(pairs):
                if not (0 <= i < self.d_s and 0 <= j < self.d_e):
                    raise ValueError(f"label {(i, j)} out of range at rank {k}")
            setattr(self, name, pairs)
        for k, (i, _) in enumerate(self.assignment):
            if i != k // self.d_e:
                raise ValueError(
                    f"rank {k} must sit on system level {k // self.d_e}, got {i}"
                )

    def apply(self, p_s, p_e) -> np.ndarray:
        """Populations after the permutation, as a (d_s, d_e) matrix.

        Inputs are sorted descending to match the frame the permutation was
        built in.
        """
        s = np.sort(_as_probs(p_s))[::-1]
        e = np.sort(_as_probs(p_e))[::-1]
        if s.size != self.d_s or e.size != self.d_e:
            raise ValueError("marginal dimensions do not match permutation")
        out = np.empty((self.d_s, self.d_e))
        for (ti, tj), (si, sj) in zip(self.assignment, self.sources):
            out[ti, tj] = s[si] * e[sj]
        return out


def block_arrangement(p_s, p_e) -> np.ndarray:
    """Block-sorted joint populations as a (d_s, d_e) matrix.

    Sorts the d_s * d_e products of the (descending) marginals and fills the
    matrix row-major, so row i holds ranks i*d_e .. (i+1)*d_e - 1.  The row
    sums are the most concentrated system marginal any permutation of the
    product spectrum can reach: the first k rows hold the k*d_e largest
    values, so the row-sum vector majorizes every other block partition.
    No product structure is assumed or checked; see `build_block_sort` for
    the factorizing case.
    """
    s = np.sort(_as_probs(p_s))[::-1]
    e = np.sort(_as_probs(p_e))[::-1]
    joint = np.outer(s, e).ravel()
    order = np.argsort(-joint, kind="stable")
    return joint[order].reshape(s.size, e.size)


def build_block_sort(p_s, p_e, tol: float = PRODUCT_TOL):
    """Block-sort the product spectrum and verify it factorizes.

    Sorts the d_s * d_e products descending (stable, ties broken by the
    row-major (i, j) label), assigns consecutive blocks of d_e ranks to
    system levels 0, 1, ..., and checks that all blockwise conditional
    environment states agree within `tol`.  Returns (BlockPermutation,
    sigma_s, sigma_e) in the sorted-marginal frame.  A conditional mismatch
    is a hard error: it means the commensurability needed for the product
    form does not hold for these marginals.
    """
    s = _sorted_full_rank(p_s, "p_s")
    e = _sorted_full_rank(p_e, "p_e")
    d_s, d_e = s.size, e.size
    joint = np.outer(s, e).ravel()
    order = np.argsort(-joint, kind="stable")
    vals = joint[order]
    blocks = vals.reshape(d_s, d_e)
    sigma_s = blocks.sum(axis=1)
    conds = blocks / sigma_s[:, None]
    dev = float(np.max(np.abs(conds - conds[0])))
    if dev > tol:
        raise ValueError(
            f"block conditionals disagree by {dev:.3e}: the sorted joint does"
            " not factorize for these marginals"
        )
    perm = BlockPermutation(
        d_s=d_s,
        d_e=d_e,
        assignment=tuple((r // d_e, r % d_e) for r in range(d_s * d_e)),
        sources=tuple((int(k) // d_e, int(k) % d_e) for k in order),
    )
    return perm, ProbDist(sigma_s), ProbDist(conds[0])


def max_erasure_bound(p_se_sorted, d_s: int, d_e: int) -> np.ndarray:
    """Prefix-sum ceilings on the erased system distribution.

    For any joint unitary, the population that can be concentrated on the
    first n system levels is at most the sum of the n * d_e largest joint
    eigenvalues.  Input must already be sorted descending.
    """
    v = _as_probs(p_se_sorted)
    if v.size != d_s * d_e:
        raise ValueError("spectrum size does not match d_s * d_e")
    if np.any(np.diff(v) > 1e-15):
        raise ValueError("spectrum must be sorted descending")
    return np.cumsum(v)[d_e - 1 :: d_e].copy()


def check_geometric_interleaving(p_se_sorted, p_e, d_e: int, tol: float = RATIO_TOL):
    """Fit the exponent linking leading joint ratios to environment ratios.

    Looks for gamma < 1 with p_j^se / p_{j+1}^se = (p_j^e / p_{j+1}^e)^gamma
    over the first d_e - 1 sorted ratios.  When the relation holds the
    erased environment is thermal at gamma * beta_e.  The exponent is fit by
    least squares through the origin in log space over all ratio pairs and
    accepted only if every pair agrees within `tol`; returns gamma or None.
    """
    v = _as_probs(p_se_sorted)
    e = _as_probs(p_e)
    if np.any(np.diff(v) > 1e-15):
        raise ValueError("joint spectrum must be sorted descending")
    if np.any(np.diff(e) > 1e-15):
        raise ValueError("environment spectrum must be sorted descending")
    if np.any(e <= 0.0) or np.any(v <= 0.0):
        raise ValueError("full-rank inputs required")
    if d_e < 2 or v.size < d_e or e.size != d_e:
        raise ValueError("need at least two environment levels")
    lr_se = np.log(v[: d_e - 1] / v[1:d_e])
    lr_e = np.log(e[:-1] / e[1:])
    denom = float(lr_e @ lr_e)
    if denom == 0.0:
        # flat environment: only an exactly flat joint is consistent, and
        # then the exponent is unidentifiable
        return None
    g = float(lr_se @ lr_e / denom)
    if np.max(np.abs(lr_se - g * lr_e)) > tol:
        return None
    if not g < 1.0:
        return None
    return g


def min_heat(ladder: EnergyLadder, rho_e, dSs: float) -> float:
    """Least heat any erasure of dSs can dump into this thermal environment.

    The optimum keeps the environment thermal while raising its entropy by
    -dSs (dSs is signed, negative for erasure), so the bound is the energy
    gap to the thermal state with entropy S(rho_e) - dSs.
    """
    pe = _as_probs(rho_e)
    fit_beta(ladder, pe)
    target = shannon_entropy(pe) - dSs
    if not (0.0 < target <= math.log(ladder.dim) + 1e-12):
        raise ValueError(
            f"target entropy {target:.6g} outside (0, ln {ladder.dim}]:"
            " this environment cannot absorb that much erasure"
        )
    _, sigma = thermal_state_with_entropy(ladder, target)
    return heat(ladder, sigma, pe)
