"""State containers and thermodynamic bookkeeping for finite-bath erasure.

Classical states are probability vectors over a fixed product basis; joint
states carry a population tensor plus an optional dense matrix holding
coherences in the same (row-major) basis.  All entropies are in nats, all
energies in units where hbar = k_B = 1, so heat is a bare number and inverse
temperature multiplies it directly.

The central identity implemented here splits the heat dissipated into a
finite environment during erasure as

    beta_e * Q_e = -dS_s + I(s:e) + S(sigma_e || rho_e)

which is exact whenever the joint evolution preserves the spectrum of the
initial product state.  `ErasureRecord.identity_residual` measures how far a
given before/after pair is from satisfying it; dephasing the evolved state
raises the joint entropy and breaks the identity, which is why callers that
want the residual must hand in the undephased state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

__all__ = [
    "ProbDist",
    "EnergyLadder",
    "JointState",
    "ErasureRecord",
    "shannon_entropy",
    "relative_entropy",
    "vn_entropy",
    "partial_trace",
    "thermal_state",
    "thermal_state_with_entropy",
    "fit_beta",
    "heat",
    "mutual_information",
    "landauer_decomposition",
]

# Input hygiene: renormalize when the sum is this close to 1, reject otherwise.
SUM_TOL = 1e-9
# Entries below -NEG_TOL are rejected; anything in [-NEG_TOL, 0) is clipped.
NEG_TOL = 1e-12
# Dense matrices must be Hermitian and PSD to within these.
HERM_TOL = 1e-10
PSD_TOL = 1e-10


def _as_probs(p) -> np.ndarray:
    """Bare probability vector from a ProbDist or array-like (no validation)."""
    if isinstance(p, ProbDist):
        return p.probs
    return np.asarray(p, dtype=float).ravel()


@dataclass
class ProbDist:
    """Normalized probability vector; the eigenvalues of a diagonal state."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float).ravel()
        if p.size == 0:
            raise ValueError("distribution must have at least one entry")
        if not np.all(np.isfinite(p)):
            raise ValueError("non-finite probability entries")
        if np.any(p < -NEG_TOL):
            raise ValueError(f"negative probability entry: min = {p.min():.3e}")
        p = np.where(p < 0.0, 0.0, p)
        total = float(p.sum())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total:.12g}, expected 1")
        self.probs = p / total

    @property
    def dim(self) -> int:
        return self.probs.size

    def __getitem__(self, j: int) -> float:
        return float(self.probs[j])

    def descending(self) -> np.ndarray:
        """Entries sorted descending; ties keep their original order."""
        order = np.argsort(-self.probs, kind="stable")
        return self.probs[order]


@dataclass
class EnergyLadder:
    """Energy levels of a subsystem, sorted non-decreasing.

    The ladder is diagonal in the same basis that labels populations, so the
    energy of a classical state is a plain dot product.
    """

    levels: np.ndarray
    omega: float | None = None

    def __post_init__(self) -> None:
        lv = np.asarray(self.levels, dtype=float).ravel()
        if lv.size == 0:
            raise ValueError("ladder must have at least one level")
        if not np.all(np.isfinite(lv)):
            raise ValueError("non-finite energy levels")
        if np.any(np.diff(lv) < 0):
            raise ValueError("energy levels must be sorted non-decreasing")
        self.levels = lv

    @property
    def dim(self) -> int:
        return self.levels.size

    def energy(self, p) -> float:
        v = _as_probs(p)
        if v.size != self.dim:
            raise ValueError("state dimension does not match ladder")
        return float(self.levels @ v)


@dataclass
class JointState:
    """Populations over a product basis, with optional dense coherences.

    `dims` is (d_s, d_e) for system+environment or (d_s, d_e, d_v) once a
    catalyst is attached.  When `coherences` is given it is the full density
    matrix in the flattened row-major product basis and its diagonal must
    match the populations; a missing `coherences` means the state is
    classical (diagonal).
    """

    dims: tuple[int, ...]
    populations: np.ndarray
    coherences: np.ndarray | None = None

    def __post_init__(self) -> None:
        dims = tuple(int(d) for d in self.dims)
        if len(dims) not in (2, 3) or any(d < 1 for d in dims):
            raise ValueError(f"dims must name 2 or 3 subsystems, got {dims}")
        pop = np.asarray(self.populations, dtype=float)
        if pop.shape != dims:
            raise ValueError(
                f"population tensor shape {pop.shape} does not match dims {dims}"
            )
        pop = ProbDist(pop.ravel()).probs.reshape(dims)
        if self.coherences is not None:
            n = int(np.prod(dims))
            mat = np.asarray(self.coherences, dtype=complex)
            if mat.shape != (n, n):
                raise ValueError(f"coherence matrix must be {n}x{n}, got {mat.shape}")
            if np.max(np.abs(mat - mat.conj().T)) > HERM_TOL:
                raise ValueError("coherence matrix is not Hermitian")
            if np.max(np.abs(np.real(np.diag(mat)) - pop.ravel())) > HERM_TOL:
                raise ValueError("coherence diagonal disagrees with populations")
            evmin = float(np.linalg.eigvalsh(mat).min())
            if evmin < -PSD_TOL:
                raise ValueError(
                    f"coherence matrix not positive semidefinite: {evmin:.3e}"
                )
            # keep the diagonal exactly in sync with the normalized populations
            mat = mat.copy()
            np.fill_diagonal(mat, pop.ravel())
            self.coherences = mat
        self.dims = dims
        self.populations = pop

    @property
    def is_classical(self) -> bool:
        return self.coherences is None

    @property
    def d_total(self) -> int:
        return int(np.prod(self.dims))

    def marginal(self, axis: int) -> ProbDist:
        """Population marginal of one subsystem."""
        other = tuple(i for i in range(len(self.dims)) if i != axis)
        return ProbDist(self.populations.sum(axis=other))

    def marginal_matrix(self, axis) -> np.ndarray:
        """Dense reduced density matrix of one subsystem (or a tuple of them)."""
        if self.coherences is None:
            keep = (axis,) if isinstance(axis, int) else tuple(axis)
            other = tuple(i for i in range(len(self.dims)) if i not in keep)
            return np.diag(self.populations.sum(axis=other).ravel()).astype(complex)
        return partial_trace(self.coherences, self.dims, keep=axis)


def partial_trace(mat: np.ndarray, dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in `keep`.

    `mat` is a density matrix over the row-major product basis of `dims`;
    `keep` is an axis index or tuple of them.  Result is ordered by the kept
    axes in their original order.
    """
    dims = tuple(int(d) for d in dims)
    if isinstance(keep, int):
        keep = (keep,)
    keep = tuple(sorted(keep))
    n = len(dims)
    t = np.asarray(mat).reshape(dims + dims)
    nrem = n
    # trace highest discarded axis first so lower indices stay valid
    for ax in sorted((i for i in range(n) if i not in keep), reverse=True):
        t = np.trace(t, axis1=ax, axis2=ax + nrem)
        nrem -= 1
    d_keep = int(np.prod([dims[i] for i in keep]))
    return t.reshape(d_keep, d_keep)


def shannon_entropy(p) -> float:
    """-sum p ln p in nats, with 0 ln 0 = 0."""
    v = _as_probs(p)
    return float(-np.sum(xlogy(v, v)))


def vn_entropy(mat: np.ndarray) -> float:
    """von Neumann entropy of a dense density matrix, in nats."""
    ev = np.linalg.eigvalsh(np.asarray(mat))
    if float(ev.min()) < -PSD_TOL:
        raise ValueError(f"matrix not positive semidefinite: {float(ev.min()):.3e}")
    ev = np.clip(ev, 0.0, None)
    return float(-np.sum(xlogy(ev, ev)))


def relative_entropy(p, q) -> float:
    """S(p || q) = sum p ln(p/q); +inf when supp(p) escapes supp(q)."""
    v, w = _as_probs(p), _as_probs(q)
    if v.size != w.size:
        raise ValueError("dimension mismatch")
    mask = v > 0.0
    if np.any(w[mask] <= 0.0):
        return math.inf
    return max(float(np.sum(v[mask] * np.log(v[mask] / w[mask]))), 0.0)


def thermal_state(ladder: EnergyLadder, beta: float) -> ProbDist:
    """Gibbs weights exp(-beta * eps_j) on the ladder, normalized."""
    if beta < 0.0:
        raise ValueError("beta must be non-negative")
    # shift by the ground energy so the exponentials cannot overflow
    w = np.exp(-beta * (ladder.levels - ladder.levels[0]))
    return ProbDist(w / w.sum())


BETA_CAP = 1e6


def thermal_state_with_entropy(
    ladder: EnergyLadder, s_target: float, tol: float = 1e-10, beta_cap: float = BETA_CAP
) -> tuple[float, ProbDist]:
    """Invert S(thermal(beta)) = s_target for beta by bisection.

    Thermal entropy decreases monotonically in beta, from ln d at beta = 0
    down to the log of the ground-level degeneracy, so a geometric bracket
    expansion followed by bisection always lands.  Returns (beta, state).

    Raises ValueError when s_target lies outside (0, ln d] or below the
    entropy floor reachable before `beta_cap` (degenerate ground levels put
    that floor above zero).
    """
    d = ladder.dim
    s_max = math.log(d)
    if not (0.0 < s_target <= s_max + 1e-12):
        raise ValueError(f"target entropy {s_target:.6g} outside (0, ln {d}]")
    span = float(ladder.levels[-1] - ladder.levels[0])
    if span == 0.0:
        # fully degenerate ladder: every temperature gives the uniform state
        if abs(s_target - s_max) <= tol:
            return 0.0, thermal_state(ladder, 0.0)
        raise ValueError("fully degenerate ladder only reaches entropy ln d")

    def ent(b: float) -> float:
        return shannon_entropy(thermal_state(ladder, b))

    if abs(ent(0.0) - s_target) <= tol:
        return 0.0, thermal_state(ladder, 0.0)
    lo, hi = 0.0, 1.0 / span
    while ent(hi) > s_target:
        hi *= 2.0
        if hi > beta_cap:
            floor = ent(beta_cap)
            raise ValueError(
                f"entropy {s_target:.6g} unreachable: floor at beta = {beta_cap:.3g}"
                f" is {floor:.6g} (degenerate ground level limits cooling)"
            )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if ent(mid) > s_target:
            lo = mid
        else:
            hi = mid
    beta = 0.5 * (lo + hi)
    state = thermal_state(ladder, beta)
    if abs(shannon_entropy(state) - s_target) > tol:
        raise ValueError("bisection failed to reach the target entropy")
    return beta, state


THERMAL_FIT_TOL = 1e-8


def fit_beta(ladder: EnergyLadder, rho_e, beta=None, tol: float = THERMAL_FIT_TOL):
    """Verify that rho_e is thermal on `ladder` and return its beta.

    Thermality means ln p_j + beta * eps_j is constant across levels.  When
    `beta` is None it is recovered by least squares of ln p against the
    energies; either way the flatness residual is checked against `tol`.
    """
    p = _as_probs(rho_e)
    if p.size != ladder.dim:
        raise ValueError("state dimension does not match ladder")
    if np.any(p <= 0.0):
        raise ValueError("thermal states are full rank; found a zero population")
    eps = ladder.levels
    logp = np.log(p)
    span = float(eps[-1] - eps[0])
    if span == 0.0:
        b = 0.0 if beta is None else float(beta)
    elif beta is None:
        ec = eps - eps.mean()
        b = -float(ec @ (logp - logp.mean()) / (ec @ ec))
    else:
        b = float(beta)
    shifted = logp + b * eps
    resid = float(np.max(np.abs(shifted - shifted.mean())))
    if resid > tol:
        raise ValueError(
            f"state is not thermal on this ladder (residual {resid:.3e} at"
            f" beta = {b:.6g})"
        )
    return b


def heat(ladder: EnergyLadder, p_final, p_init) -> float:
    """Energy gained by the subsystem holding `ladder`: sum eps (p' - p)."""
    f, i = _as_probs(p_final), _as_probs(p_init)
    if f.size != ladder.dim or i.size != ladder.dim:
        raise ValueError("state dimension does not match ladder")
    return float(ladder.levels @ (f - i))


def mutual_information(joint: JointState) -> float:
    """I(s:e) = S(s) + S(e) - S(se) for a bipartite joint.

    Classical joints use population marginals; dense joints use partial
    traces and the full spectrum.  Can round to a few parts in 1e-13 below
    zero for product states, which is left to the caller to interpret.
    """
    if len(joint.dims) != 2:
        raise ValueError("mutual information needs a bipartite joint")
    if joint.is_classical:
        s = shannon_entropy(joint.populations.sum(axis=1))
        e = shannon_entropy(joint.populations.sum(axis=0))
        se = shannon_entropy(joint.populations.ravel())
    else:
        s = vn_entropy(joint.marginal_matrix(0))
        e = vn_entropy(joint.marginal_matrix(1))
        se = vn_entropy(joint.coherences)
    return s + e - se


# Mutual information and relative entropy are non-negative; allow this much
# rounding slack before declaring an ErasureRecord inconsistent.
_RECORD_TOL = 1e-10


@dataclass
class ErasureRecord:
    """All terms of the finite-bath erasure balance at one inverse temperature.

    Sign conventions: dSs < 0 for erasure, Qe > 0 when the environment heats
    up.  `Ise` and `relent` always refer to the evolved joint state against
    the initial thermal environment.
    """

    dSs: float
    dSe: float
    Qe: float
    Ise: float
    relent: float
    beta_e: float

    def __post_init__(self) -> None:
        for name in ("Ise", "relent"):
            v = getattr(self, name)
            if v < -_RECORD_TOL:
                raise ValueError(f"{name} = {v:.3e} is negative beyond tolerance")
            if v < 0.0:
                setattr(self, name, 0.0)

    @property
    def identity_residual(self) -> float:
        """|beta_e Qe - (-dSs + Ise + relent)|; ~0 for spectrum-preserving maps."""
        return abs(self.beta_e * self.Qe - (-self.dSs + self.Ise + self.relent))


def landauer_decomposition(
    ladder: EnergyLadder, rho_e, joint_after: JointState, rho_s, beta_e=None
) -> ErasureRecord:
    """Split the erasure balance for one evolution into its three terms.

    `rho_e` must be thermal on `ladder` (checked; beta_e fitted when not
    supplied).  `joint_after` is the evolved system+environment state; when
    it carries coherences all entropies come from dense spectra, so the
    identity residual vanishes for unitary evolutions.  `rho_s` is the
    initial system state; the initial joint is the product rho_s x rho_e.
    """
    pe = _as_probs(rho_e)
    ps = _as_probs(rho_s)
    if len(joint_after.dims) != 2:
        raise ValueError("joint_after must be bipartite (system, environment)")
    d_s, d_e = joint_after.dims
    if ps.size != d_s or pe.size != d_e:
        raise ValueError("marginal dimensions do not match joint_after")
    beta = fit_beta(ladder, pe, beta_e)
    pop = joint_after.populations
    sig_s = pop.sum(axis=1)
    sig_e = pop.sum(axis=0)
    if joint_after.is_classical:
        s_s = shannon_entropy(sig_s)
        s_e = shannon_entropy(sig_e)
        s_se = shannon_entropy(pop.ravel())
    else:
        s_s = vn_entropy(joint_after.marginal_matrix(0))
        s_e = vn_entropy(joint_after.marginal_matrix(1))
        s_se = vn_entropy(joint_after.coherences)
    d_ss = s_s - shannon_entropy(ps)
    d_se = s_e - shannon_entropy(pe)
    q_e = heat(ladder, sig_e, pe)
    ise = s_s + s_e - s_se
    # environment relative entropy against the thermal reference; rho_e is
    # diagonal so only the population marginal of sigma_e enters the cross term
    relent = -s_e - float(sig_e @ np.log(pe))
    return ErasureRecord(d_ss, d_se, q_e, ise, relent, beta)
