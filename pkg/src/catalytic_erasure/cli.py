"""Command-line front end: sweeps, catalyst reports, erasure checks.

Three subcommands:

* ``jc-sweep``    runs the oscillator-erasure experiment over a grid of
                  x = e^{-beta omega} and writes CSV plus a JSON summary,
* ``catalyze``    reads a classical joint state from a file and reports
                  witnesses, the best catalyst, and what it achieves,
* ``check-erasure`` reads two marginals and reports the block-sorting
                  analysis: commensurability, achieved and minimal heat.

Exit codes: 0 success, 1 input error (unreadable or invalid state files),
2 configuration error (bad flags, bad grid, bad config file).  All floats
are printed with 12 significant digits; rerunning with the same inputs and
``--deterministic`` yields byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .catalyst import (
    CatalystInfeasible,
    UncorrelatedError,
    apply_catalytic,
    find_witnesses,
    optimize_dv,
)
from .majorization import majorizes
from .optimal_erasure import (
    block_arrangement,
    build_block_sort,
    check_commensurate,
    check_geometric_interleaving,
    max_erasure_bound,
    min_heat,
)
from .qstate import (
    EnergyLadder,
    JointState,
    ProbDist,
    heat,
    mutual_information,
    shannon_entropy,
)
from .jc_sim import run_experiment

CSV_HEADER = "x_exp_minus_beta_omega,dSs,Qe,Ise,gamma_H,gamma_E,dI,best_dv,t,coherence_diag"

SWEEP_DEFAULTS = {
    "grid": "0.05:0.65:25",
    "t_policy": "max-erasure",
    "dv_min": 3,
    "dv_max": 10,
    "omega": 1.0,
    "out": "jc_sweep.csv",
}


class InputError(Exception):
    """User-supplied data (state files) could not be parsed or is invalid."""


class ConfigError(Exception):
    """Flags or config file ask for something unusable."""


def _fmt(v) -> str:
    return f"{float(v):.12g}"


def _round12(obj):
    """Round floats to 12 significant digits for stable JSON output."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _round12(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round12(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_round12(float(v)) for v in obj]
    return obj


def parse_state_file(path: str):
    """Parse a key-value state file: a dims line, then one number per line.

    Format: optional ``#`` comments and blank lines anywhere; the first
    payload line is ``dims: d1 [d2 ...]``; every following payload line is
    one population, row-major.  Returns (dims tuple, float array).
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from exc
    dims = None
    values: list[float] = []
    for lineno, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        if dims is None:
            if not text.lower().startswith("dims:"):
                raise InputError(
                    f"{path}:{lineno}: expected 'dims: ...' as the first entry,"
                    f" got {text!r}"
                )
            try:
                dims = tuple(int(tok) for tok in text[5:].split())
            except ValueError:
                raise InputError(f"{path}:{lineno}: dims entries must be integers")
            if not dims or any(d < 1 for d in dims):
                raise InputError(f"{path}:{lineno}: dims must be positive integers")
            continue
        for tok in text.split():
            try:
                values.append(float(tok))
            except ValueError:
                raise InputError(f"{path}:{lineno}: not a number: {tok!r}")
    if dims is None:
        raise InputError(f"{path}: no dims line found")
    expected = int(np.prod(dims))
    if len(values) != expected:
        raise InputError(
            f"{path}: expected {expected} populations for dims {dims},"
            f" found {len(values)}"
        )
    return dims, np.array(values)


def _load_joint(path: str) -> JointState:
    dims, values = parse_state_file(path)
    if len(dims) != 2:
        raise InputError(f"{path}: need 'dims: d_s d_e' for a joint state, got {dims}")
    try:
        return JointState(dims, values.reshape(dims))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _load_dist(path: str) -> ProbDist:
    dims, values = parse_state_file(path)
    if len(dims) != 1:
        raise InputError(f"{path}: need 'dims: d' for a distribution, got {dims}")
    try:
        return ProbDist(values)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _parse_ladder(spec: str, dim: int) -> EnergyLadder:
    """Ladder flag: 'uniform:<omega>' or comma-separated level energies."""
    try:
        if spec.startswith("uniform:"):
            omega = float(spec.split(":", 1)[1])
            if omega <= 0:
                raise ConfigError("uniform ladder needs omega > 0")
            return EnergyLadder(omega * np.arange(1, dim + 1, dtype=float), omega=omega)
        levels = np.array([float(tok) for tok in spec.split(",")])
        if levels.size != dim:
            raise ConfigError(
                f"ladder has {levels.size} levels but the environment has {dim}"
            )
        return EnergyLadder(levels)
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"cannot parse ladder {spec!r}: {exc}") from exc


def _parse_grid(spec: str) -> np.ndarray:
    parts = spec.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid must be start:stop:steps, got {spec!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        steps = int(parts[2])
    except ValueError:
        raise ConfigError(f"grid must be start:stop:steps with numbers, got {spec!r}")
    if steps < 1:
        raise ConfigError("grid is empty (steps < 1); nothing to compute")
    if not (0.0 < start <= stop < 1.0):
        raise ConfigError(
            "grid values are x = exp(-beta*omega) and must satisfy"
            f" 0 < start <= stop < 1, got {spec!r}"
        )
    return np.linspace(start, stop, steps)


def _parse_t_policy(spec: str):
    if spec == "max-erasure":
        return "max-erasure", None
    if spec.startswith("fixed:"):
        try:
            t = float(spec.split(":", 1)[1])
        except (ValueError, IndexError):
            raise ConfigError(f"cannot parse t policy {spec!r}")
        if not t > 0.0:
            raise ConfigError("fixed t must be positive")
        return "fixed", t
    raise ConfigError(f"unknown t policy {spec!r} (use max-erasure or fixed:<t>)")


def _merge_config(args: argparse.Namespace) -> dict:
    """Defaults, then config file, then explicitly non-default flags."""
    merged = dict(SWEEP_DEFAULTS)
    if args.config is not None:
        try:
            with open(args.config, "r", encoding="utf-8") as fh:
                loaded = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"{args.config}: {exc.strerror or exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON: {exc}") from exc
        unknown = set(loaded) - set(SWEEP_DEFAULTS)
        if unknown:
            raise ConfigError(f"{args.config}: unknown keys {sorted(unknown)}")
        merged.update(loaded)
    for key in SWEEP_DEFAULTS:
        flag_value = getattr(args, key)
        if flag_value != SWEEP_DEFAULTS[key]:
            merged[key] = flag_value
    return merged


def cmd_jc_sweep(args: argparse.Namespace) -> int:
    cfg = _merge_config(args)
    xs = _parse_grid(str(cfg["grid"]))
    policy, t_fixed = _parse_t_policy(str(cfg["t_policy"]))
    dv_min, dv_max = int(cfg["dv_min"]), int(cfg["dv_max"])
    if not (3 <= dv_min <= dv_max):
        raise ConfigError("need 3 <= dv-min <= dv-max")
    omega = float(cfg["omega"])
    if omega <= 0:
        raise ConfigError("omega must be positive")
    out = str(cfg["out"])

    betas = -np.log(xs) / omega
    records = run_experiment(
        betas,
        omega=omega,
        t_policy=policy,
        t_fixed=t_fixed,
        dv_min=dv_min,
        dv_max=dv_max,
    )

    lines = []
    if not args.deterministic:
        lines.append(f"# generated {datetime.now(timezone.utc).isoformat()}")
    lines.append(CSV_HEADER)
    for r in records:
        lines.append(
            ",".join(
                [
                    _fmt(r.x), _fmt(r.dSs), _fmt(r.Qe), _fmt(r.Ise),
                    _fmt(r.gamma_H), _fmt(r.gamma_E), _fmt(r.dI),
                    str(r.best_dv), _fmt(r.t), _fmt(r.coherence_diag),
                ]
            )
        )
    with open(out, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")

    peak = max(records, key=lambda r: -math.inf if math.isnan(r.gamma_H) else r.gamma_H)
    summary = {
        "points": len(records),
        "grid": str(cfg["grid"]),
        "t_policy": str(cfg["t_policy"]),
        "dv_range": [dv_min, dv_max],
        "omega": omega,
        "seed": args.seed,
        "peak_gamma_H": peak.gamma_H,
        "peak_x": peak.x,
        "peak_t": peak.t,
        "peak_dv": peak.best_dv,
        "csv": out,
    }
    if not args.deterministic:
        summary["generated"] = datetime.now(timezone.utc).isoformat()
    summary_path = out[: -len(".csv")] + ".summary.json" if out.endswith(".csv") else out + ".summary.json"
    with open(summary_path, "w", encoding="utf-8") as fh:
        json.dump(_round12(summary), fh, indent=2)
        fh.write("\n")
    print(
        f"wrote {out} ({len(records)} rows); peak gamma_H = {peak.gamma_H:.4g}"
        f" at x = {peak.x:.4g}"
    )
    return 0


def cmd_catalyze(args: argparse.Namespace) -> int:
    joint = _load_joint(args.state_file)
    d_s, d_e = joint.dims
    if not (3 <= args.dv_min <= args.dv_max):
        raise ConfigError("need 3 <= dv-min <= dv-max")
    ladder = _parse_ladder(args.ladder, d_e)
    sigma_e = joint.marginal(1)
    try:
        witnesses = find_witnesses(joint)
    except ValueError as exc:
        raise InputError(f"{args.state_file}: {exc}") from exc
    report = {
        "input": {
            "dims": list(joint.dims),
            "mutual_information": mutual_information(joint),
            "S_s": shannon_entropy(joint.marginal(0)),
            "S_e": shannon_entropy(sigma_e),
            "env_energy": ladder.energy(sigma_e),
        },
        "witnesses": [
            {
                "tuple_one_based": list(w.as_one_based()),
                "ratio_strong": w.ratio_strong,
                "ratio_weak": w.ratio_weak,
            }
            for w in witnesses
        ],
        "correlated": bool(witnesses),
    }
    if not witnesses:
        report["message"] = "uncorrelated, no catalytic gain possible"
        return _emit(report, args.out)
    try:
        best = optimize_dv(joint, range(args.dv_min, args.dv_max + 1), objective="entropy")
    except CatalystInfeasible as exc:
        report["feasible"] = False
        report["message"] = (
            "correlated, but no catalyst dimension in range admits the"
            f" equal-transfer spectrum ({exc})"
        )
        return _emit(report, args.out)
    rep = best.report
    rho_e_out = rep.rho_e_out
    report["feasible"] = True
    report["best"] = {
        "witness_one_based": list(best.witness.as_one_based()),
        "d_v": best.d_v,
        "spectrum": list(best.solution.spectrum.probs),
        "delta": best.solution.delta,
        "transfer": (best.d_v - 2) * best.solution.delta,
        "gamma_E": best.gamma_e,
    }
    report["after"] = {
        "S_e": shannon_entropy(rho_e_out),
        "dSe": rep.dSe_prime,
        "mutual_information": mutual_information(joint) + rep.dI,
        "dI": rep.dI,
        "env_energy": ladder.energy(rho_e_out),
        "heat_step": heat(ladder, rho_e_out, sigma_e),
    }
    report["majorization_ok"] = majorizes(rho_e_out, sigma_e)
    return _emit(report, args.out)


def cmd_check_erasure(args: argparse.Namespace) -> int:
    p_s = _load_dist(args.system_file)
    p_e = _load_dist(args.env_file)
    try:
        rep = check_commensurate(p_s, p_e)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    ladder = _parse_ladder(args.ladder, p_e.dim)
    pe_sorted = p_e.descending()
    arranged = block_arrangement(p_s, p_e)
    sigma_s = arranged.sum(axis=1)
    env_marg = arranged.sum(axis=0)
    joint_sorted = np.sort(np.outer(p_s.probs, p_e.probs).ravel())[::-1]
    d_s, d_e = p_s.dim, p_e.dim
    dss = shannon_entropy(sigma_s) - shannon_entropy(p_s)
    out = {
        "dims": {"d_s": d_s, "d_e": d_e},
        "premise_ok": rep.premise_ok,
        "condition": rep.condition,
        "m": rep.m,
        "sigma_s": list(sigma_s),
        "dSs_achieved": dss,
        "erasure_bound_prefixes": list(max_erasure_bound(joint_sorted, d_s, d_e)),
        "heat_achieved": heat(ladder, env_marg, pe_sorted),
    }
    if rep.condition != "none":
        _, sig_s, sig_e = build_block_sort(p_s, p_e)
        out["sigma_e"] = list(sig_e.probs)
        out["product_form"] = True
    else:
        out["product_form"] = False
    gamma = check_geometric_interleaving(joint_sorted, pe_sorted, d_e)
    out["gamma_exponent"] = gamma
    try:
        out["min_heat"] = min_heat(ladder, pe_sorted, dss)
    except ValueError as exc:
        out["min_heat"] = None
        out["min_heat_note"] = str(exc)
    if d_s == 2 and d_e == 2:
        out["note"] = "swap optimal, no catalytic gain"
    return _emit(out, args.out)


def _emit(report: dict, out_path: str | None) -> int:
    text = json.dumps(_round12(report), indent=2) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="catalytic-erasure",
        description="Erasure with finite environments: sweeps, catalysts, bounds.",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("jc-sweep", help="run the oscillator-erasure sweep")
    sweep.add_argument("--grid", default=SWEEP_DEFAULTS["grid"],
                       metavar="START:STOP:STEPS",
                       help="x = exp(-beta*omega) grid (default %(default)s)")
    sweep.add_argument("--t-policy", dest="t_policy",
                       default=SWEEP_DEFAULTS["t_policy"],
                       metavar="{max-erasure|fixed:<t>}",
                       help="evolution-time rule (default %(default)s)")
    sweep.add_argument("--dv-min", dest="dv_min", type=int,
                       default=SWEEP_DEFAULTS["dv_min"])
    sweep.add_argument("--dv-max", dest="dv_max", type=int,
                       default=SWEEP_DEFAULTS["dv_max"])
    sweep.add_argument("--omega", type=float, default=SWEEP_DEFAULTS["omega"])
    sweep.add_argument("--out", default=SWEEP_DEFAULTS["out"])
    sweep.add_argument("--config", default=None,
                       help="JSON file with the same keys as the flags")
    sweep.add_argument("--seed", type=int, default=None,
                       help="recorded in the summary; the sweep itself is deterministic")
    sweep.add_argument("--deterministic", action="store_true",
                       help="suppress timestamps for byte-identical reruns")
    sweep.set_defaults(func=cmd_jc_sweep)

    cat = sub.add_parser("catalyze", help="find witnesses and a catalyst for a joint state")
    cat.add_argument("state_file", help="joint state file (dims: d_s d_e)")
    cat.add_argument("--dv-min", dest="dv_min", type=int, default=3)
    cat.add_argument("--dv-max", dest="dv_max", type=int, default=8)
    cat.add_argument("--ladder", default="uniform:1.0",
                     help="environment energies: uniform:<omega> or e1,e2,...")
    cat.add_argument("--out", default=None, help="write JSON here instead of stdout")
    cat.set_defaults(func=cmd_catalyze)

    chk = sub.add_parser("check-erasure", help="block-sorting analysis for two marginals")
    chk.add_argument("system_file", help="system distribution file (dims: d_s)")
    chk.add_argument("env_file", help="environment distribution file (dims: d_e)")
    chk.add_argument("--ladder", default="uniform:1.0",
                     help="environment energies: uniform:<omega> or e1,e2,...")
    chk.add_argument("--out", default=None, help="write JSON here instead of stdout")
    chk.set_defaults(func=cmd_check_erasure)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except UncorrelatedError as exc:
        # library-level report of the only-if direction; surfaced as data
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
