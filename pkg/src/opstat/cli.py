"""Command-line front end.

Exit codes: 0 success, 1 a domain finding (violation, degeneracy, infeasible
fit), 2 malformed input or usage. Results go to stdout as JSON (or CSV for
count tables); errors go to stderr as a one-line JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import formats as fmt
from .errors import OperationSumViolation, OpStatError, Underdetermined
from .estimation import GENERATOR, fit_mle, goodness_of_fit, simulate_counts
from .ftt import (
    canonical_states,
    combined_memory_manual,
    dichotomy_values,
    interference_excess,
    predict_dichotomies,
    predict_tru,
    tru_sums,
)
from .logic import DEFAULT_EVENT_CAP, Logic, build_logic, is_orthomodular_poset
from .manual import coarsen_pack, identify_outcomes, is_event
from .spin import (
    coarsen_frame,
    fit_density,
    frame_weights,
    random_density,
    random_frame,
)
from .weights import (
    common_zero_set,
    event_probability,
    is_superposition,
    sum_violations,
    validate_weight,
    weight_space_dof,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    s = arg.lstrip()
    if s.startswith("{") or s.startswith("["):
        return arg
    try:
        return Path(arg).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None


def _load_json(arg: str):
    try:
        return json.loads(_load_text(arg))
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {arg[:40]!r}: {exc.msg}") from None


def _emit(obj, out):
    out.write(json.dumps(obj, indent=2) + "\n")


def _split(ids: str) -> list[str]:
    return [x for x in ids.split(",") if x] if ids else []


def _error_payload(exc: Exception) -> dict:
    payload = {"error": type(exc).__name__, "message": str(exc)}
    if hasattr(exc, "to_dict"):
        payload.update(exc.to_dict())
    return payload


# manual ---------------------------------------------------------------------


def cmd_manual_validate(args, out):
    m = fmt.manual_from_json(_load_json(args.file))
    _emit({"valid": True, "operations": len(m), "outcomes": len(m.outcomes)}, out)
    return 0


def _logic_json(logic: Logic):
    report = is_orthomodular_poset(logic)
    return {
        "elements": len(logic),
        "atoms": len(logic.atoms()),
        "labels": [logic.label(p) for p in range(len(logic))],
        "zero": logic.zero,
        "one": logic.one,
        "hasse_edges": [list(e) for e in logic.hasse_edges()],
        "orthocomplement": [[p, logic.ortho[p]] for p in range(len(logic)) if p <= logic.ortho[p]],
        "orthomodular": report.ok,
        "violated_law": report.law,
        "witness": list(report.witness),
    }


def cmd_manual_logic(args, out):
    m = fmt.manual_from_json(_load_json(args.file))
    logic = build_logic(m, cap=args.cap)
    if not isinstance(logic, Logic):
        _emit({"degenerate": True, "reason": logic.reason, "detail": list(logic.detail)}, out)
        return 1
    result = _logic_json(logic)
    _emit(result, out)
    return 0 if result["orthomodular"] else 1


def cmd_manual_coarsen(args, out):
    m = fmt.manual_from_json(_load_json(args.file))
    _emit(coarsen_pack(m, args.op, _split(args.pack), args.new_id).to_dict(), out)
    return 0


def cmd_manual_identify(args, out):
    m = fmt.manual_from_json(_load_json(args.file))
    ident = fmt.identification_from_json(_load_json(args.identification))
    _emit(identify_outcomes(m, ident).to_dict(), out)
    return 0


# weights --------------------------------------------------------------------


def cmd_weights_check(args, out):
    manual, values = fmt.weight_values_from_json(_load_json(args.file))
    try:
        validate_weight(manual, values)
        violations = []
    except OperationSumViolation:
        violations = sum_violations(manual, values)
    dof = weight_space_dof(manual)
    result = {
        "valid": not violations,
        "violations": [v.to_dict() for v in violations],
        "dof": dof if isinstance(dof, int) else None,
    }
    _emit(result, out)
    return 1 if violations else 0


def cmd_weights_superposition(args, out):
    omega = fmt.weight_from_json(_load_json(args.file))
    gens = [fmt.weight_from_json(_load_json(g)) for g in args.generators]
    _emit(
        {
            "superposition": is_superposition(omega.manual, omega, gens),
            "common_zero_set": sorted(common_zero_set(omega.manual, gens)),
        },
        out,
    )
    return 0


def cmd_weights_event_prob(args, out):
    omega = fmt.weight_from_json(_load_json(args.file))
    ev = is_event(omega.manual, _split(args.event))
    if ev is None:
        _emit({"event": False, "outcomes": sorted(_split(args.event))}, out)
        return 1
    _emit({"event": ev.sorted(), "probability": event_probability(omega, ev)}, out)
    return 0


# spin -----------------------------------------------------------------------


def _load_frames(arg):
    obj = _load_json(arg)
    if isinstance(obj, dict):
        obj = obj.get("frames")
    if not isinstance(obj, list):
        raise fmt.FormatError("expected a list of frames")
    return [fmt.frame_from_json(f) for f in obj]


def cmd_spin_frames(args, out):
    rng = np.random.default_rng(args.seed)
    _emit([fmt.frame_to_json(random_frame(rng)) for _ in range(args.count)], out)
    return 0


def cmd_spin_density(args, out):
    rng = np.random.default_rng(args.seed)
    _emit(fmt.density_to_json(random_density(rng, args.rank)), out)
    return 0


def cmd_spin_weights(args, out):
    rho = fmt.density_from_json(_load_json(args.density))
    frames = _load_frames(args.frames)
    _emit({"weights": [frame_weights(rho, f) for f in frames]}, out)
    return 0


def cmd_spin_fit_density(args, out):
    frames = _load_frames(args.frames)
    obs = _load_json(args.weights)
    if isinstance(obs, dict):
        obs = obs.get("weights")
    try:
        fit = fit_density(frames, obs)
    except Underdetermined as exc:
        _emit({"underdetermined": True, "null_dim": exc.null_dim}, out)
        return 1
    _emit(
        {
            "density": fmt.density_to_json(fit.matrix),
            "residual": fit.residual,
            "min_eigenvalue": fit.min_eigenvalue,
            "not_positive": fit.not_positive,
        },
        out,
    )
    return 0


# ftt ------------------------------------------------------------------------


def cmd_ftt_predict(args, out):
    params, bias = fmt.params_from_json(_load_json(args.params))
    _emit(predict_dichotomies(params, bias).to_dict(), out)
    return 0


def cmd_ftt_sums(args, out):
    params, _ = fmt.params_from_json(_load_json(args.params))
    _emit(dict(zip(("T", "R", "U"), tru_sums(params))), out)
    return 0


def cmd_ftt_interference(args, out):
    params, _ = fmt.params_from_json(_load_json(args.params))
    et, er = interference_excess(params)
    _emit({"excess_T": et, "excess_R": er, "tru": predict_tru(params)}, out)
    return 0


def cmd_ftt_canonical(args, out):
    _emit({k: w.to_dict() for k, w in canonical_states().items()}, out)
    return 0


# est ------------------------------------------------------------------------


def cmd_est_simulate(args, out):
    params, bias = fmt.params_from_json(_load_json(args.params))
    counts = simulate_counts(params, bias, args.n, args.seed)
    if args.format == "csv":
        out.write(fmt.counts_to_csv(counts))
    else:
        _emit(
            {
                "counts": [dict(zip(fmt.COUNTS_HEADER, r)) for r in counts.rows()],
                "seed": args.seed,
                "generator": GENERATOR,
            },
            out,
        )
    return 0


def cmd_est_fit(args, out):
    counts = fmt.counts_from_csv(_load_text(args.counts))
    result = fit_mle(counts, model=args.model, tol=args.tol, max_iter=args.max_iter)
    _emit(fmt.fit_to_json(result), out)
    return 0 if result.converged else 1


def cmd_est_gof(args, out):
    counts = fmt.counts_from_csv(_load_text(args.counts))
    result = fmt.fit_from_json(_load_json(args.fit))
    _emit(fmt.gof_to_json(goodness_of_fit(result, counts)), out)
    return 0


# demo -----------------------------------------------------------------------


def cmd_demo_interference(args, out):
    params, _ = fmt.params_from_json(_load_json(args.params))
    manual = combined_memory_manual()
    values = dichotomy_values(predict_dichotomies(params))
    violations = sum_violations(manual, values)
    et, er = interference_excess(params)
    _emit(
        {
            "manual": manual.to_dict(),
            "sums": dict(zip(("T", "R", "U"), tru_sums(params))),
            "excess": {"T": et, "R": er},
            "valid": not violations,
            "violations": [
                dict(v.to_dict(), error="OperationSumViolation", excess=v.sum - 1)
                for v in violations
            ],
        },
        out,
    )
    return 1 if violations else 0


def cmd_demo_spin_additivity(args, out):
    rng = np.random.default_rng(args.seed)
    rows = []
    worst_sum = worst_kept = 0.0
    for _ in range(args.count):
        rho, frame = random_density(rng), random_frame(rng)
        before = frame_weights(rho, frame)
        after = frame_weights(rho, coarsen_frame(frame, frame[1], frame[2]))
        d_sum = abs(after[1] - (before[1] + before[2]))
        d_kept = abs(after[0] - before[0])
        worst_sum, worst_kept = max(worst_sum, d_sum), max(worst_kept, d_kept)
        rows.append({"fine": before, "coarse": after})
    _emit(
        {
            "seed": args.seed,
            "trials": rows if args.count <= 20 else rows[:20],
            "max_merged_discrepancy": worst_sum,
            "max_untouched_discrepancy": worst_kept,
        },
        out,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="opstat", description=__doc__.splitlines()[0])
    groups = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def add(group, name, func, help):
        sp = group.add_parser(name, help=help)
        sp.set_defaults(func=func)
        return sp

    g = groups.add_parser("manual", help="manuals and their logics").add_subparsers(dest="cmd", required=True)
    sp = add(g, "validate", cmd_manual_validate, "validate a manual JSON file")
    sp.add_argument("file")
    sp = add(g, "logic", cmd_manual_logic, "build the logic and check orthomodularity")
    sp.add_argument("file")
    sp.add_argument("--cap", type=int, default=DEFAULT_EVENT_CAP)
    sp = add(g, "coarsen", cmd_manual_coarsen, "pack outcomes of one operation")
    sp.add_argument("file")
    sp.add_argument("--op", type=int, required=True)
    sp.add_argument("--pack", required=True, help="comma-separated outcome ids")
    sp.add_argument("--new-id", required=True)
    sp = add(g, "identify", cmd_manual_identify, "merge outcomes")
    sp.add_argument("file")
    sp.add_argument("--identification", required=True)

    g = groups.add_parser("weights", help="weight functions").add_subparsers(dest="cmd", required=True)
    sp = add(g, "check", cmd_weights_check, "validate a weight JSON file")
    sp.add_argument("file")
    sp = add(g, "superposition", cmd_weights_superposition, "superposition test")
    sp.add_argument("file")
    sp.add_argument("--generators", nargs="+", required=True)
    sp = add(g, "event-prob", cmd_weights_event_prob, "probability of an event")
    sp.add_argument("file")
    sp.add_argument("--event", required=True, help="comma-separated outcome ids")

    g = groups.add_parser("spin", help="spin-one frames and densities").add_subparsers(dest="cmd", required=True)
    sp = add(g, "frames", cmd_spin_frames, "random rank-one frames")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=1)
    sp = add(g, "density", cmd_spin_density, "random density operator")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--rank", type=int, default=3, choices=(1, 2, 3))
    sp = add(g, "weights", cmd_spin_weights, "trace-rule weights on frames")
    sp.add_argument("--density", required=True)
    sp.add_argument("--frames", required=True)
    sp = add(g, "fit-density", cmd_spin_fit_density, "least-squares density from weights")
    sp.add_argument("--frames", required=True)
    sp.add_argument("--weights", required=True)

    g = groups.add_parser("ftt", help="fuzzy trace model").add_subparsers(dest="cmd", required=True)
    for name, func, help in (
        ("predict", cmd_ftt_predict, "dichotomy response probabilities"),
        ("sums", cmd_ftt_sums, "TRU sums of identified dichotomy outcomes"),
        ("interference", cmd_ftt_interference, "packing excess for targets and related"),
    ):
        add(g, name, func, help).add_argument("--params", required=True)
    add(g, "canonical", cmd_ftt_canonical, "perfect, no-memory and gist-only weights")

    g = groups.add_parser("est", help="simulation and estimation").add_subparsers(dest="cmd", required=True)
    sp = add(g, "simulate", cmd_est_simulate, "simulate a count table")
    sp.add_argument("--params", required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp = add(g, "fit", cmd_est_fit, "maximum-likelihood fit")
    sp.add_argument("--counts", required=True)
    sp.add_argument("--model", type=int, choices=(4, 7), default=4)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--max-iter", type=int, default=10000)
    sp = add(g, "gof", cmd_est_gof, "goodness of fit")
    sp.add_argument("--counts", required=True)
    sp.add_argument("--fit", required=True)

    g = groups.add_parser("demo", help="worked demonstrations").add_subparsers(dest="cmd", required=True)
    sp = add(g, "interference", cmd_demo_interference, "memory-manual sum violation")
    sp.add_argument("--params", required=True)
    sp = add(g, "spin-additivity", cmd_demo_spin_additivity, "spin-one coarsening contrast")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, default=5)
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.group == "est" and args.cmd == "simulate" and args.n < 1:
            raise UsageError("--n must be at least 1")
        return args.func(args, stdout)
    except (UsageError, fmt.FormatError) as exc:
        stderr.write(json.dumps({"error": "usage", "message": str(exc)}) + "\n")
        return 2
    except OpStatError as exc:
        payload = _error_payload(exc)
        _emit(payload, stdout)
        stderr.write(json.dumps(payload) + "\n")
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
