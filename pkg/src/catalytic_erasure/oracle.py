"""Independent reference implementations used to pin down the fast paths.

Everything here is deliberately brute force or delegated to a library
routine with known error behaviour, so tests can compare the structured
constructions elsewhere in the package against an implementation that
shares none of their code.
"""

from __future__ import annotations

import itertools

import numpy as np
import scipy.linalg
from scipy.special import xlogy

from .qstate import EnergyLadder, JointState, _as_probs, mutual_information

__all__ = [
    "brute_force_best_marginal",
    "random_unitary",
    "matrix_exp",
    "random_correlated_joint",
]

# d! permutation tables get big fast; 8! x 8 indices is ~2.5 MB, 9! is not ok
BRUTE_DIM_CAP = 8


def brute_force_best_marginal(
    joint_spectrum, d_s: int, d_e: int, objective: str = "min_system_entropy",
    ladder: EnergyLadder | None = None,
):
    """Exhaust all placements of a joint spectrum on a d_s x d_e grid.

    Permutations are enumerated lexicographically and applied as
    arrangement[slot] = spectrum[perm[slot]] with slots in row-major (i, j)
    order.  Objectives:

    * "min_system_entropy": minimize S of the system marginal,
    * "min_heat": among arrangements reaching that minimum entropy (within
      1e-12), minimize the environment marginal energy on `ladder`.

    Returns (best_value, best_perm).  Ties resolve to the earliest
    permutation in enumeration order, so results are reproducible.
    """
    spec = _as_probs(joint_spectrum)
    n = d_s * d_e
    if spec.size != n:
        raise ValueError(f"spectrum has {spec.size} entries, expected {n}")
    if n > BRUTE_DIM_CAP:
        raise ValueError(f"joint dimension {n} exceeds brute-force cap {BRUTE_DIM_CAP}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.intp)
    vals = spec[perms].reshape(-1, d_s, d_e)
    marg_s = vals.sum(axis=2)
    ents = -np.sum(xlogy(marg_s, marg_s), axis=1)
    if objective == "min_system_entropy":
        best = int(np.argmin(ents))
        return float(ents[best]), tuple(int(k) for k in perms[best])
    if objective == "min_heat":
        if ladder is None or ladder.dim != d_e:
            raise ValueError("min_heat needs an environment ladder of dimension d_e")
        marg_e = vals.sum(axis=1)
        energies = marg_e @ ladder.levels
        achievers = np.flatnonzero(ents <= ents.min() + 1e-12)
        best = achievers[int(np.argmin(energies[achievers]))]
        return float(energies[best]), tuple(int(k) for k in perms[best])
    raise ValueError(f"unknown objective {objective!r}")


def random_unitary(dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix.

    The R diagonal is rephased to be positive, which is what makes the QR
    output actually Haar rather than merely unitary.  Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z / np.sqrt(2.0))
    d = np.diag(r)
    return q * (d / np.abs(d))


def matrix_exp(hamiltonian: np.ndarray, t: float) -> np.ndarray:
    """Evolution operator exp(-i H t) via scipy's Pade/scaling-squaring expm."""
    return scipy.linalg.expm(-1j * t * np.asarray(hamiltonian, dtype=complex))


def random_correlated_joint(
    d_s: int, d_e: int, seed, correlated: bool = True,
    mi_floor: float = 0.01, max_tries: int = 200,
) -> JointState:
    """Random full-rank classical joint, correlated or exactly product.

    Correlated draws are rejection-sampled until the mutual information
    clears `mi_floor` (in nats), so downstream witness searches are never
    handed a borderline case.  Product draws build an outer product, whose
    mutual information is zero to rounding.  Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    if not correlated:
        ps = rng.uniform(0.05, 1.0, d_s)
        pe = rng.uniform(0.05, 1.0, d_e)
        pop = np.outer(ps / ps.sum(), pe / pe.sum())
        return JointState((d_s, d_e), pop)
    for _ in range(max_tries):
        pop = rng.uniform(0.05, 1.0, (d_s, d_e))
        joint = JointState((d_s, d_e), pop / pop.sum())
        if mutual_information(joint) > mi_floor:
            return joint
    raise RuntimeError(
        f"no draw with I(s:e) > {mi_floor} in {max_tries} tries at"
        f" d_s = {d_s}, d_e = {d_e}"
    )
