"""Catalytic mitigation of erasure heat via correlation witnesses.

A classical joint state of system and environment is *correlated* exactly
when some 2x2 minor of its population matrix has unequal row ratios,

    q[I, J] / q[I, J'] > q[I', J] / q[I', J'],

and each such tuple is a witness that a catalyst can exploit.  Given a
witness and a catalyst dimension d_v, a probability ladder p_1 > ... >
p_{d_v} is chosen so that a fixed amount delta of joint weight moves across
every rung:

    delta = q[I',J'] p_k - q[I',J] p_{k+1}   (k = 1 .. d_v-1)
    delta = q[I,J] p_{d_v} - q[I,J'] p_1

The cyclic structure returns the catalyst to its exact initial state while
the environment marginal picks up (d_v - 2) * delta at level J, paid out of
level J'.  The permutation realizing this is controlled on the system and
swaps (e, v) pairs only, so the system marginal is untouched.

Everything is validated rather than assumed: the equal-delta system always
has a unique solution, but positivity and strict monotonicity can fail for
unfavorable inputs, in which case `solve_catalyst` raises
`CatalystInfeasible` and scans simply move on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .qstate import (
    EnergyLadder,
    JointState,
    ProbDist,
    heat,
    mutual_information,
    shannon_entropy,
    _as_probs,
)

__all__ = [
    "CorrelationWitness",
    "CatalystSolution",
    "TriplePermutation",
    "MitigationReport",
    "OptimizeResult",
    "CatalystInfeasible",
    "UncorrelatedError",
    "find_witnesses",
    "solve_catalyst",
    "solve_for_witness",
    "build_permutation",
    "apply_catalytic",
    "gamma_h",
    "gamma_e",
    "optimize_dv",
]

# relative slack for the strict ratio inequalities defining a witness
WITNESS_EPS = 1e-10
# marginal preservation after the permutation, absolute
MARGINAL_TOL = 1e-12
# equal-delta residual across the chain, absolute
DELTA_TOL = 1e-12
# below this, gamma denominators count as zero and the ratio is undefined
GAMMA_DEN_TOL = 1e-14
# closed-form evaluation switches to log space above this catalyst dimension
LOG_SPACE_DV = 32


class CatalystInfeasible(ValueError):
    """The equal-delta spectrum exists but fails a physical validation.

    `reason` is a short machine-checkable tag; `diagnostics` holds the raw
    solution for inspection.
    """

    def __init__(self, reason: str, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.reason = reason
        self.diagnostics = diagnostics or {}


class UncorrelatedError(ValueError):
    """Raised by scans that require at least one correlation witness."""


@dataclass
class CorrelationWitness:
    """Index tuple (I, I', J, J') certifying correlation, 0-based.

    ratio_strong = q[I,J]/q[I,J'] and ratio_weak = q[I',J]/q[I',J'] with
    ratio_strong exceeding both ratio_weak and 1.  Note the weak ratio may
    lie below 1: some correlated states admit no orientation with both
    ratios on the same side of 1, so only the strong one is pinned there.
    """

    I: int
    Iprime: int
    J: int
    Jprime: int
    ratio_strong: float
    ratio_weak: float

    def __post_init__(self) -> None:
        if self.I == self.Iprime or self.J == self.Jprime:
            raise ValueError("witness needs two distinct levels on each side")
        if not (self.ratio_strong > self.ratio_weak * (1.0 + WITNESS_EPS)):
            raise ValueError("witness requires ratio_strong > ratio_weak")
        if not (self.ratio_strong > 1.0 + WITNESS_EPS):
            raise ValueError("witness requires ratio_strong > 1")

    @property
    def tuple0(self) -> tuple[int, int, int, int]:
        return (self.I, self.Iprime, self.J, self.Jprime)

    def as_one_based(self) -> tuple[int, int, int, int]:
        return (self.I + 1, self.Iprime + 1, self.J + 1, self.Jprime + 1)


def find_witnesses(
    joint: JointState, eps: float = WITNESS_EPS, env_levels=None
) -> list[CorrelationWitness]:
    """Exhaustive correlation-witness search over index tuples.

    Returns every (I, I', J, J') whose strong ratio exceeds both the weak
    ratio and 1 by the relative margin `eps`, in lexicographic tuple order.
    The list is empty iff the joint is product (zero mutual information);
    both orientations of a minor can appear since they transfer probability
    in opposite directions.  `env_levels` restricts J, J' to a subset, which
    experiment drivers use to model interactions touching only part of the
    environment.
    """
    if len(joint.dims) != 2:
        raise ValueError("witness search needs a bipartite joint")
    q = joint.populations
    if np.any(q <= 0.0):
        raise ValueError("witness search needs strictly positive populations")
    d_s, d_e = joint.dims
    if env_levels is None:
        env = range(d_e)
    else:
        env = sorted(set(int(j) for j in env_levels))
        if env and (env[0] < 0 or env[-1] >= d_e):
            raise ValueError("env_levels out of range")
    out: list[CorrelationWitness] = []
    for i in range(d_s):
        for ip in range(d_s):
            if ip == i:
                continue
            for j in env:
                for jp in env:
                    if jp == j:
                        continue
                    strong = q[i, j] / q[i, jp]
                    weak = q[ip, j] / q[ip, jp]
                    if strong > weak * (1.0 + eps) and strong > 1.0 + eps:
                        out.append(
                            CorrelationWitness(i, ip, j, jp, float(strong), float(weak))
                        )
    return out


@dataclass
class CatalystSolution:
    """Equal-delta catalyst spectrum for one witness and dimension."""

    spectrum: ProbDist
    delta: float
    d_v: int
    witness: CorrelationWitness | None = None
    # max |delta_k - mean delta| over the chain, for diagnostics
    delta_residual: float = 0.0


def _chain_deltas(p: np.ndarray, a: float, b: float, c: float, d: float) -> np.ndarray:
    """All d_v transfer amounts of the cycle for a candidate spectrum."""
    inner = b * p[:-1] - a * p[1:]
    closing = c * p[-1] - d * p[0]
    return np.append(inner, closing)


def _validate_solution(p: np.ndarray, delta: float, a, b, c, d, d_v, context: str):
    deltas = _chain_deltas(p, a, b, c, d)
    resid = float(np.max(np.abs(deltas - deltas.mean())))
    diag = {"spectrum": p, "deltas": deltas, "residual": resid, "context": context}
    if not np.all(np.isfinite(p)):
        raise CatalystInfeasible("nonfinite", f"{context}: solution not finite", diag)
    if np.any(p <= 0.0):
        raise CatalystInfeasible(
            "positivity", f"{context}: spectrum has non-positive entries", diag
        )
    if np.any(np.diff(p) >= 0.0):
        raise CatalystInfeasible(
            "monotonicity", f"{context}: spectrum not strictly decreasing", diag
        )
    # tolerance scales with the witness populations (the system is homogeneous)
    if resid > DELTA_TOL * max(1.0, a, b, c, d):
        raise CatalystInfeasible(
            "delta-mismatch",
            f"{context}: transfer amounts differ by {resid:.3e}",
            diag,
        )
    if np.any(deltas <= 0.0):
        raise CatalystInfeasible(
            "chain", f"{context}: strict transfer chain violated (delta <= 0)", diag
        )
    if delta <= 0.0:
        raise CatalystInfeasible("chain", f"{context}: delta <= 0", diag)


def _solve_float(a: float, b: float, c: float, d: float, d_v: int):
    """Telescoped closed form in plain floats; fine for short chains."""
    r = b / a
    lr = math.log(r)
    ks = np.arange(d_v, dtype=float)
    alpha = r ** ks
    if lr == 0.0:
        geo = ks.copy()
    else:
        geo = np.expm1(ks * lr) / math.expm1(lr)
    # p_{k+1} = alpha_k p_1 - (geo_k / a) delta; closing rung fixes delta/p_1
    y = (c * alpha[-1] - d) / (1.0 + (c / a) * geo[-1])
    u = alpha - (geo / a) * y
    z = float(u.sum())
    return u / z, y / z


def _refine_float(p: np.ndarray, delta: float, a, b, c, d):
    """One iterative-refinement step on the equal-transfer linear system.

    The telescoped evaluation cancels badly when b >> a (nearly flat
    spectra): intermediate powers grow large while their difference stays
    O(1), costing several digits.  Solving for the correction against the
    explicitly assembled system restores machine accuracy at O(d_v^3) for
    the small d_v the float path handles.
    """
    dv = p.size
    m = np.zeros((dv + 1, dv + 1))
    rhs = np.zeros(dv + 1)
    for k in range(dv - 1):
        m[k, k] = b
        m[k, k + 1] = -a
        m[k, dv] = -1.0
    m[dv - 1, dv - 1] = c
    m[dv - 1, 0] = -d
    m[dv - 1, dv] = -1.0
    m[dv, :dv] = 1.0
    rhs[dv] = 1.0
    x = np.append(p, delta)
    try:
        x = x - np.linalg.solve(m, m @ x - rhs)
    except np.linalg.LinAlgError:
        return p, delta
    return x[:-1], float(x[-1])


def _solve_logspace(a: float, b: float, c: float, d: float, d_v: int):
    """Same closed form with ratio powers accumulated in log space.

    Long chains make r**k overflow or underflow well before the normalized
    spectrum does, so everything is carried as logarithms until the final
    normalization.  Only meaningful when y > 0; a non-positive y is reported
    as the usual chain failure by the caller's validation.
    """
    lr = math.log(b) - math.log(a)
    ks = np.arange(d_v, dtype=float)
    log_alpha = ks * lr
    # geo_k = (r^k - 1)/(r - 1) > 0; log computed stably on either branch
    with np.errstate(divide="ignore"):
        if lr == 0.0:
            log_geo = np.log(ks)
        elif lr > 0.0:
            log_geo = ks * lr + np.log1p(-np.exp(-ks * lr)) - (lr + math.log1p(-math.exp(-lr)))
        else:
            log_geo = np.log1p(-np.exp(ks * lr)) - math.log1p(-math.exp(lr))
    log_geo[0] = -np.inf  # geo_0 = 0 exactly
    # y = (c alpha - d) / (1 + (c/a) geo) at k = d_v - 1
    la, lb, lc, ld = math.log(a), math.log(b), math.log(c), math.log(d)
    log_c_alpha = lc + log_alpha[-1]
    if log_c_alpha <= ld:
        return None  # y <= 0, chain infeasible
    log_num = log_c_alpha + math.log1p(-math.exp(ld - log_c_alpha))
    log_den_term = lc - la + log_geo[-1]
    log_den = np.logaddexp(0.0, log_den_term)
    log_y = log_num - log_den
    # u_k = alpha_k - (geo_k / a) y must stay positive
    log_sub = log_geo - la + log_y
    gap = log_sub - log_alpha
    if np.any(gap[1:] >= 0.0):
        return None  # some u_k <= 0
    log_u = log_alpha + np.log1p(-np.exp(np.minimum(gap, -1e-300)))
    shift = float(log_u.max())
    u = np.exp(log_u - shift)
    z = float(u.sum())
    p = u / z
    delta = math.exp(log_y - shift) / z
    return p, delta


def solve_catalyst(
    q_IJ: float, q_IJp: float, q_IpJ: float, q_IpJp: float, d_v: int
) -> CatalystSolution:
    """Catalyst spectrum making all d_v cycle transfers equal.

    Arguments are the four joint populations of the witness minor.  The
    equal-delta conditions plus normalization form a linear system with a
    unique solution, evaluated here in telescoped closed form (log-space
    accumulation for d_v > 32).  The result is validated: strictly positive,
    strictly decreasing, all transfers equal within 1e-12 and strictly
    positive.  Raises CatalystInfeasible when validation fails, which is a
    property of the inputs, not an error of the solver.
    """
    d_v = int(d_v)
    if d_v < 3:
        raise ValueError("catalyst dimension must be at least 3")
    vals = [float(q_IJ), float(q_IJp), float(q_IpJ), float(q_IpJp)]
    if any(not (v > 0.0) for v in vals):
        raise ValueError("witness populations must be strictly positive")
    c, d, a, b = vals
    context = f"d_v={d_v}"
    if d_v > LOG_SPACE_DV:
        sol = _solve_logspace(a, b, c, d, d_v)
        if sol is None:
            raise CatalystInfeasible(
                "chain",
                f"{context}: strict transfer chain violated (delta <= 0)",
                {"context": context},
            )
        p, delta = sol
    else:
        p, delta = _solve_float(a, b, c, d, d_v)
        if np.all(np.isfinite(p)):
            p, delta = _refine_float(p, delta, a, b, c, d)
    _validate_solution(p, delta, a, b, c, d, d_v, context)
    return CatalystSolution(
        spectrum=ProbDist(p),
        delta=float(delta),
        d_v=d_v,
        delta_residual=float(
            np.max(np.abs(_chain_deltas(p, a, b, c, d) - delta))
        ),
    )


def solve_for_witness(joint: JointState, w: CorrelationWitness, d_v: int) -> CatalystSolution:
    """solve_catalyst fed from a joint's populations at the witness tuple."""
    q = joint.populations
    sol = solve_catalyst(
        q[w.I, w.J], q[w.I, w.Jprime], q[w.Iprime, w.J], q[w.Iprime, w.Jprime], d_v
    )
    sol.witness = w
    return sol


@dataclass
class TriplePermutation:
    """Involution on the s x e x v product basis given as disjoint swaps.

    Every swap fixes the system index (the construction is a controlled
    unitary with the system as control), so the system marginal is
    preserved identically.
    """

    swaps: tuple

    def __post_init__(self) -> None:
        swaps = tuple((tuple(x), tuple(y)) for x, y in self.swaps)
        seen: set = set()
        for x, y in swaps:
            if len(x) != 3 or len(y) != 3:
                raise ValueError("swap endpoints must be (i_s, j_e, k_v) triples")
            if x == y:
                raise ValueError("swap endpoints must differ")
            if x[0] != y[0]:
                raise ValueError("swaps must preserve the system index")
            for t in (x, y):
                if t in seen:
                    raise ValueError(f"swaps are not disjoint at {t}")
                seen.add(t)
        self.swaps = swaps

    def index_map(self, dims: tuple[int, int, int]) -> np.ndarray:
        """Flattened involution over row-major (i_s, j_e, k_v) indices."""
        d_s, d_e, d_v = dims
        idx = np.arange(d_s * d_e * d_v)
        for x, y in self.swaps:
            for t in (x, y):
                if not (0 <= t[0] < d_s and 0 <= t[1] < d_e and 0 <= t[2] < d_v):
                    raise ValueError(f"swap endpoint {t} outside dims {dims}")
            fx = (x[0] * d_e + x[1]) * d_v + x[2]
            fy = (y[0] * d_e + y[1]) * d_v + y[2]
            idx[fx], idx[fy] = fy, fx
        return idx


def build_permutation(w: CorrelationWitness, d_v: int) -> TriplePermutation:
    """The d_v-swap cycle for a witness: I'-branch ladder plus I-branch return.

    The I' branch swaps (I', J', k) with (I', J, k+1) for each rung k; the I
    branch closes the catalyst cycle by swapping (I, J', 0) with
    (I, J, d_v - 1).  Applying it twice is the identity.
    """
    if d_v < 3:
        raise ValueError("catalyst dimension must be at least 3")
    swaps = [
        ((w.Iprime, w.Jprime, k), (w.Iprime, w.J, k + 1)) for k in range(d_v - 1)
    ]
    swaps.append(((w.I, w.Jprime, 0), (w.I, w.J, d_v - 1)))
    return TriplePermutation(tuple(swaps))


@dataclass
class MitigationReport:
    """Before/after bookkeeping for one catalytic permutation."""

    sigma_s: ProbDist
    sigma_e: ProbDist
    rho_s_out: ProbDist
    rho_e_out: ProbDist
    rho_v_out: ProbDist
    delta: float
    dSe_prime: float
    dI: float
    Qe_step: float | None = None
    Qe_prime: float | None = None
    dense_dev_s: float | None = None
    dense_dev_v: float | None = None


def apply_catalytic(
    joint: JointState,
    sol: CatalystSolution,
    perm: TriplePermutation,
    ladder: EnergyLadder | None = None,
    rho_e=None,
) -> tuple[JointState, MitigationReport]:
    """Attach the catalyst, permute, and account for what moved.

    The catalyst enters as a product factor with spectrum sol.spectrum; the
    permutation is applied to populations (and conjugated onto the dense
    matrix when the input carries coherences).  Hard errors if the catalyst
    or system marginals shift beyond 1e-12, since the construction
    guarantees both and a violation means the (sol, perm) pair is
    inconsistent with this joint.

    With `ladder` the heat of the catalytic step is reported; adding
    `rho_e` (the pre-erasure thermal environment) also reports the total
    heat Q'_e against that reference.  Dense inputs get deviation
    diagnostics: how far the dense system and catalyst marginals stray from
    their classical values.
    """
    if len(joint.dims) != 2:
        raise ValueError("apply_catalytic expects a bipartite joint")
    d_s, d_e = joint.dims
    spec = sol.spectrum.probs
    d_v = sol.d_v
    dims3 = (d_s, d_e, d_v)
    pop3 = joint.populations[:, :, None] * spec[None, None, :]
    idx = perm.index_map(dims3)
    new_pop = pop3.reshape(-1)[idx].reshape(dims3)
    new_coh = None
    if not joint.is_classical:
        coh3 = np.kron(joint.coherences, np.diag(spec).astype(complex))
        new_coh = coh3[np.ix_(idx, idx)]

    sigma_s = joint.marginal(0)
    sigma_e = joint.marginal(1)
    rho_s_out = new_pop.sum(axis=(1, 2))
    rho_e_out = new_pop.sum(axis=(0, 2))
    rho_v_out = new_pop.sum(axis=(0, 1))
    dev_v = float(np.max(np.abs(rho_v_out - spec)))
    if dev_v > MARGINAL_TOL:
        raise ValueError(
            f"catalyst marginal not preserved (max deviation {dev_v:.3e});"
            " solution and permutation disagree with this joint"
        )
    dev_s = float(np.max(np.abs(rho_s_out - sigma_s.probs)))
    if dev_s > MARGINAL_TOL:
        raise ValueError(
            f"system marginal not preserved (max deviation {dev_s:.3e})"
        )

    se_pop = new_pop.sum(axis=2)
    i_before = mutual_information(joint if joint.is_classical else JointState(joint.dims, joint.populations))
    i_after = mutual_information(JointState((d_s, d_e), se_pop))
    d_se = shannon_entropy(rho_e_out) - shannon_entropy(sigma_e)

    qe_step = qe_prime = None
    if ladder is not None:
        qe_step = heat(ladder, rho_e_out, sigma_e)
        if rho_e is not None:
            qe_prime = heat(ladder, rho_e_out, rho_e)

    dense_dev_s = dense_dev_v = None
    out = JointState(dims3, new_pop, new_coh)
    if new_coh is not None:
        mat_s = out.marginal_matrix(0)
        mat_v = out.marginal_matrix(2)
        dense_dev_s = float(np.max(np.abs(mat_s - np.diag(rho_s_out))))
        dense_dev_v = float(np.max(np.abs(mat_v - np.diag(rho_v_out))))

    report = MitigationReport(
        sigma_s=sigma_s,
        sigma_e=sigma_e,
        rho_s_out=ProbDist(rho_s_out),
        rho_e_out=ProbDist(rho_e_out),
        rho_v_out=ProbDist(rho_v_out),
        delta=sol.delta,
        dSe_prime=float(d_se),
        dI=float(i_after - i_before),
        Qe_step=qe_step,
        Qe_prime=qe_prime,
        dense_dev_s=dense_dev_s,
        dense_dev_v=dense_dev_v,
    )
    return out, report


def gamma_h(Qe: float, Qe_prime: float, Te: float, dSs: float) -> float:
    """Heat-mitigation coefficient (Qe - Q'e) / (Qe + Te dSs).

    The denominator is the dissipation in excess of the reversible limit
    (dSs is signed, negative for erasure).  When it is not positive beyond
    tolerance the coefficient is undefined and NaN is returned.
    """
    den = Qe + Te * dSs
    if not den > GAMMA_DEN_TOL * max(1.0, abs(Qe)):
        return math.nan
    return (Qe - Qe_prime) / den


def gamma_e(dSe_prime: float, Ise: float) -> float:
    """Entropy-mitigation coefficient -dS'e / I(s:e); NaN when I is ~zero."""
    if not Ise > GAMMA_DEN_TOL:
        return math.nan
    return -dSe_prime / Ise


@dataclass
class OptimizeResult:
    witness: CorrelationWitness
    d_v: int
    solution: CatalystSolution
    permutation: TriplePermutation
    state_out: JointState
    report: MitigationReport
    score: float
    gamma_h: float
    gamma_e: float
    scanned: int
    feasible: int


def optimize_dv(
    joint: JointState,
    dv_range,
    objective: str = "heat",
    ladder: EnergyLadder | None = None,
    rho_e=None,
    Te: float | None = None,
    dSs: float | None = None,
    env_levels=None,
    eps: float = WITNESS_EPS,
    policy: str = "exhaustive",
) -> OptimizeResult:
    """Scan (witness, d_v) pairs, score each valid catalyst, return the best.

    objective "heat" maximizes gamma_h and needs `ladder`, `rho_e`, `Te`,
    `dSs` for the heat bookkeeping; "entropy" maximizes gamma_e against the
    joint's own mutual information.  policy "exhaustive" scores every
    witness; "greedy" keeps only the witness with the largest
    strong-to-weak ratio gap before scanning d_v, which is cheaper when the
    environment is large.  Ties break to the smallest d_v, then the
    lexicographically smallest witness tuple.

    Raises UncorrelatedError when no witness exists and CatalystInfeasible
    when no (witness, d_v) pair validates.
    """
    if objective not in ("heat", "entropy"):
        raise ValueError(f"unknown objective {objective!r}")
    if objective == "heat" and (ladder is None or rho_e is None or Te is None or dSs is None):
        raise ValueError("objective 'heat' needs ladder, rho_e, Te and dSs")
    witnesses = find_witnesses(joint, eps=eps, env_levels=env_levels)
    if not witnesses:
        raise UncorrelatedError("uncorrelated, no catalytic gain possible")
    if policy == "greedy":
        witnesses = [max(witnesses, key=lambda w: w.ratio_strong / w.ratio_weak)]
    elif policy != "exhaustive":
        raise ValueError(f"unknown policy {policy!r}")

    ise = mutual_information(joint) if joint.is_classical else mutual_information(
        JointState(joint.dims, joint.populations)
    )
    qe_base = None
    if objective == "heat":
        qe_base = heat(ladder, joint.marginal(1), rho_e)

    best = None
    best_key = None
    scanned = feasible = 0
    for w in witnesses:
        for d_v in dv_range:
            scanned += 1
            try:
                sol = solve_for_witness(joint, w, d_v)
            except CatalystInfeasible:
                continue
            feasible += 1
            perm = build_permutation(w, d_v)
            state_out, report = apply_catalytic(joint, sol, perm, ladder=ladder, rho_e=rho_e)
            g_e = gamma_e(report.dSe_prime, ise)
            if objective == "heat":
                g_h = gamma_h(qe_base, report.Qe_prime, Te, dSs)
                score = g_h
            else:
                g_h = math.nan
                score = g_e
            if math.isnan(score):
                continue
            key = (-score, d_v, w.tuple0)
            if best is None or key < best_key:
                best_key = key
                best = OptimizeResult(
                    witness=w,
                    d_v=d_v,
                    solution=sol,
                    permutation=perm,
                    state_out=state_out,
                    report=report,
                    score=score,
                    gamma_h=g_h,
                    gamma_e=g_e,
                    scanned=0,
                    feasible=0,
                )
    if best is None:
        raise CatalystInfeasible(
            "no-valid-combination",
            f"no (witness, d_v) pair validated across {scanned} candidates",
        )
    best.scanned = scanned
    best.feasible = feasible
    return best
