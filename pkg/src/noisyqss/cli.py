"""Command-line entry point: ``noisyqss run|sweep|figure|tables|validate|ssqi``.

Exit status is 0 on success, 1 when a check or probability bound fails and
2 for malformed input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace

from . import experiments as ex
from .config import ConfigError, config_to_dict, load_config
from .protocol import EvalMode, Evaluation, run
from .qstate import TOL_SIM, state_from_angles
from .ssqi import ssqi_report

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    pass


def _override_eval(cfg, trials=None, seed=None):
    if trials is None and seed is None:
        return cfg
    ev = cfg.evaluation
    mode = EvalMode.MONTE_CARLO if trials is not None else ev.mode
    return replace(cfg, evaluation=Evaluation(
        mode, ev.trials if trials is None else trials, ev.seed if seed is None else seed))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def cmd_run(args) -> int:
    cfg = _override_eval(load_config(args.config), args.trials, args.seed)
    report = run(cfg, workers=args.workers)
    values = report.to_dict(include_tuples=args.tuples)
    ex.check_bounds(values, ex.PROBABILITY_FIELDS)
    print(_dump({"config": config_to_dict(cfg), "report": values}))
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _override_eval(load_config(args.config), args.trials, args.seed)
    spec = ex.SweepSpec(args.vary, args.start, args.stop, args.steps, base)
    rows = ex.write_sweep(spec, args.out, workers=args.workers)
    print(f"wrote {len(rows)} rows to {args.out}")
    return EXIT_OK


def cmd_figure(args) -> int:
    curves = ex.write_figure(args.figure, args.out_dir, args.steps, args.trials, args.seed)
    print(f"wrote {len(curves)} curves for {args.figure} to {args.out_dir}")
    return EXIT_OK


def cmd_tables(args) -> int:
    if args.gammas is not None:
        if any(not 0 <= g <= 1 for g in args.gammas):
            raise InputError("damping strengths must lie in [0, 1]")
        rows = ex.table_rows(tuple(args.gammas))
    else:
        if not 0 <= args.gamma <= 1:
            raise InputError("damping strength must lie in [0, 1]")
        rows = ex.table_rows(args.gamma)
    ex.write_csv(args.out or sys.stdout, ex.TABLE_COLUMNS, rows)
    bad = [r for r in rows if r["abs_diff"] > TOL_SIM]
    for r in bad:
        print(f"mismatch: {r['prep']} {r['op']} {r['secret']} abs_diff={r['abs_diff']:.3e}", file=sys.stderr)
    return EXIT_FAIL if bad else EXIT_OK


def cmd_validate(args) -> int:
    gammas = tuple(args.gamma) if args.gamma else (0.1, 0.3, 0.7)
    results = ex.validate(args.tolerance, args.only, gammas)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        extra = f" ({r.detail})" if r.detail else ""
        print(f"{status} [{r.group}] {r.name}: max_dev={r.max_dev:.3e}{extra}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_ssqi(args) -> int:
    if not (0 <= args.theta <= math.pi) or not (0 <= args.phi < 2 * math.pi):
        raise InputError("need theta in [0, pi] and phi in [0, 2*pi)")
    cfg = load_config(args.config)
    report = ssqi_report(cfg, state_from_angles(args.theta, args.phi))
    print(_dump({"theta": args.theta, "phi": args.phi, **report}))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisyqss", description="Noisy multiparty quantum secret sharing.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate one JSON config and print a JSON report")
    p.add_argument("config")
    p.add_argument("--trials", type=int, help="run Monte Carlo with this many trials")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--tuples", action="store_true", help="include per-tuple exact errors")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep", help="sweep one parameter and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--vary", required=True, choices=ex.SWEEP_PARAMS)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="write the curves behind one figure")
    p.add_argument("figure")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--steps", type=int, default=101)
    p.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials per point; 0 skips")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("tables", help="closed-form against simulated per-tuple errors")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--gamma", type=float)
    g.add_argument("--gammas", type=float, nargs=3, metavar=("GAMMA_A", "GAMMA_B", "GAMMA_C"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("validate", help="run the oracle-equivalence battery")
    p.add_argument("--tolerance", type=float, default=TOL_SIM)
    p.add_argument("--only", nargs="+", choices=list(ex.VALIDATION_GROUPS))
    p.add_argument("--gamma", type=float, nargs="+", help="damping strengths for the table checks")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("ssqi", help="teleportation fidelity with shared correction bits")
    p.add_argument("--config", required=True)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--phi", type=float, required=True)
    p.set_defaults(func=cmd_ssqi)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ex.BoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (ConfigError, ex.SpecError, InputError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
