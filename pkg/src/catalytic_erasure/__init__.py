"""Erasure thermodynamics with finite environments.

The library covers three layers:

* `qstate`: classical and block-diagonal joint states, entropies, thermal
  states, and the exact bookkeeping identity splitting dissipated heat into
  entropy change, correlation, and relative-entropy terms,
* `catalyst`, `majorization`: correlation witnesses and the equal-transfer
  catalyst spectrum that converts residual system-environment correlation
  into a strictly lower environment entropy (and, on an energy ladder,
  lower heat) without changing the catalyst's own state,
* `optimal_erasure`, `jc_sim`: block-sorting permutations that realize the
  best single-shot erasure allowed by the joint spectrum, and a qubit
  coupled to a truncated oscillator mode as a worked experiment.

`oracle` holds brute-force and dense-matrix cross-checks used by the test
suite; `cli` exposes the `catalytic-erasure` command.
"""

__version__ = "1.0.0"

from .qstate import (
    EnergyLadder,
    ErasureRecord,
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
from .majorization import (
    energy_via_partial_sums,
    majorizes,
    passive_energy,
    two_level_transfer,
)
from .catalyst import (
    CatalystInfeasible,
    CatalystSolution,
    CorrelationWitness,
    MitigationReport,
    OptimizeResult,
    TriplePermutation,
    UncorrelatedError,
    apply_catalytic,
    build_permutation,
    find_witnesses,
    gamma_e,
    gamma_h,
    optimize_dv,
    solve_catalyst,
    solve_for_witness,
)
from .optimal_erasure import (
    BlockPermutation,
    CommensurabilityReport,
    block_arrangement,
    build_block_sort,
    check_commensurate,
    check_geometric_interleaving,
    max_erasure_bound,
    min_heat,
)
from .jc_sim import (
    JCModel,
    SweepRecord,
    coherence_magnitude,
    dephase,
    evolve,
    oscillator_ladder,
    required_truncation,
    run_experiment,
)

__all__ = [
    "EnergyLadder", "ErasureRecord", "JointState", "ProbDist",
    "fit_beta", "heat", "landauer_decomposition", "mutual_information",
    "partial_trace", "relative_entropy", "shannon_entropy",
    "thermal_state", "thermal_state_with_entropy", "vn_entropy",
    "energy_via_partial_sums", "majorizes", "passive_energy",
    "two_level_transfer",
    "CatalystInfeasible", "CatalystSolution", "CorrelationWitness",
    "MitigationReport", "OptimizeResult", "TriplePermutation",
    "UncorrelatedError", "apply_catalytic", "build_permutation",
    "find_witnesses", "gamma_e", "gamma_h", "optimize_dv",
    "solve_catalyst", "solve_for_witness",
    "BlockPermutation", "CommensurabilityReport", "block_arrangement",
    "build_block_sort", "check_commensurate", "check_geometric_interleaving",
    "max_erasure_bound", "min_heat",
    "JCModel", "SweepRecord", "coherence_magnitude", "dephase", "evolve",
    "oscillator_ladder", "required_truncation", "run_experiment",
]
