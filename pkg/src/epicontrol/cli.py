"""Command-line interface.

Subcommands: compare (full comparison protocol), simulate (one policy),
sweep (q_x grid), calibrate (budget matching only), policy-debug (inspect
the optimal-control quantities for a snapshot), lp-check (solve an LP from
a text file).

Exit codes: 0 success, 2 config error, 3 calibration failure, 4 numerical
invariant violation.
"""

import argparse
import sys
from dataclasses import replace

import numpy as np

from .baselines import PolicyKind, PolicySpec, calibrate_scale
from .dynamics import ControlParams, ModelParams, init_state
from .errors import (
    CalibrationError,
    ConfigError,
    EpicontrolError,
    InvariantViolationError,
    NumericalError,
)
from .graph import load_edge_list_file
from .harness import (
    BatchRunner,
    POLICY_SEED_BLOCK,
    parse_config_file,
    run_experiment,
    run_single_policy,
    run_sweep,
)
from .lp import LinearProgram, LpStatus, solve
from .soc import (
    compute_constants,
    compute_value_constants,
    hjb_residuals,
    optimal_intensity,
    solve_policy_lp,
)


def _load_config(args):
    cfg = parse_config_file(args.config)
    overrides = {}
    if getattr(args, "graph", None):
        overrides["graph_path"] = args.graph
    if getattr(args, "out", None):
        overrides["output_dir"] = args.out
    if getattr(args, "seed", None) is not None:
        overrides["base_seed"] = args.seed
    if getattr(args, "jobs", None) is not None:
        overrides["jobs"] = args.jobs
    if getattr(args, "allow_unmatched", False):
        overrides["allow_unmatched"] = True
    return replace(cfg, **overrides) if overrides else cfg


def _cmd_compare(args):
    cfg = _load_config(args)
    result = run_experiment(cfg)
    print(f"target treatments (SOC mean): {result.target_treatments:.3f}")
    for label, stats in result.stats.items():
        print(
            f"{label:6s} coverage {stats.coverage_mean:10.3f} "
            f"± {stats.coverage_sem:.3f} (SEM), "
            f"treatments {stats.treatments_mean:9.2f}"
        )
    if result.unmatched:
        print(f"WARNING: budget not matched within ±5% for: "
              f"{', '.join(result.unmatched)} (see UNMATCHED.txt)")
    print(f"outputs in {result.output_dir}")
    return 0


def _cmd_simulate(args):
    cfg = _load_config(args)
    results = run_single_policy(cfg, args.policy, args.scale, args.budget)
    cov = np.mean([m.total_infection_coverage for _, _, m, _ in results])
    trt = np.mean([m.total_treatments for _, _, m, _ in results])
    print(f"{args.policy}: {len(results)} runs, mean coverage {cov:.3f}, "
          f"mean treatments {trt:.2f}")
    return 0


def _cmd_sweep(args):
    cfg = _load_config(args)
    rows = run_sweep(cfg)
    for q_x, label, mean, sem in rows:
        print(f"q_x={q_x:g} {label:6s} coverage {mean:10.3f} ± {sem:.3f}")
    return 0


def _cmd_calibrate(args):
    cfg = _load_config(args)
    net = load_edge_list_file(cfg.graph_path)
    n = net.node_count
    mp, cp = cfg.model_params(), cfg.control_params(n)
    from .graph import spectral_drop_scores

    labels = [args.policy] if args.policy else [
        p for p in cfg.policies
        if not PolicyKind.from_label(p).front_loaded and p != "SOC"
    ]
    needs_scores = any(
        PolicyKind.from_label(p) is PolicyKind.SPECTRAL for p in labels
    )
    runner = BatchRunner(
        net, mp, cp, cfg.t_final, cfg.jobs,
        spectral_drop_scores(net) if needs_scores else None,
    )
    R = cfg.runs_per_policy
    initials = [
        tuple(int(i) for i in np.random.default_rng(cfg.base_seed + r).choice(
            n, size=cfg.initial_infected_count, replace=False))
        for r in range(R)
    ]
    soc_index = list(cfg.policies).index("SOC")
    soc_seeds = [cfg.base_seed + soc_index * POLICY_SEED_BLOCK + r
                 for r in range(R)]
    target = runner.mean_treatments(PolicySpec(PolicyKind.SOC),
                                    soc_seeds, initials)
    print(f"target treatments (SOC mean over {R} runs): {target:.3f}")
    for label in labels:
        p_index = list(cfg.policies).index(label)
        seeds = [cfg.base_seed + p_index * POLICY_SEED_BLOCK + r
                 for r in range(R)]
        spec, achieved = calibrate_scale(
            PolicySpec(PolicyKind.from_label(label)), target,
            lambda s, b, _seeds=seeds: runner.mean_treatments(
                s, _seeds[:b], initials[:b]),
            R,
        )
        print(f"{label:6s} scale {spec.scale:.6g} achieved {achieved:.3f}")
    return 0


def _parse_node_list(net, text):
    nodes = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        if net.node_labels and token in net.node_labels:
            nodes.append(net.index_of(token))
        else:
            nodes.append(int(token))
    return nodes


def _cmd_policy_debug(args):
    net = load_edge_list_file(args.graph)
    n = net.node_count
    mp = ModelParams(args.beta, args.gamma, args.delta, args.rho)
    cp = ControlParams(q_lambda=args.q_lambda, q_x=args.q_x, eta=args.eta, n=n)
    infected = _parse_node_list(net, args.infected)
    state = init_state(net, infected)
    pc = compute_constants(mp, cp)
    d, objective = solve_policy_lp(net, state.X, pc)
    lam = optimal_intensity(state, net, pc, cp, d)
    vc = compute_value_constants(net, state.X, d, mp, cp)
    res = hjb_residuals(vc, net, state.X, mp, cp)
    print(f"infected: {sorted(infected)}")
    print(f"lp objective: {objective:.9g}")
    np.set_printoptions(precision=6, suppress=True, linewidth=120)
    print(f"d: {d}")
    print(f"lambda*: {lam}")
    print(f"max HJB residual: {res.max_residual:.3e}")
    return 0


def _cmd_lp_check(args):
    rows = []
    with open(args.file, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                rows.append([float(tok) for tok in line.split()])
    if len(rows) < 1:
        raise ConfigError("LP file needs an objective line")
    c = np.asarray(rows[0])
    G = np.asarray([r[:-1] for r in rows[1:]]).reshape(len(rows) - 1, c.size)
    h = np.asarray([r[-1] for r in rows[1:]])
    sol = solve(LinearProgram(c, G, h))
    print(f"status: {sol.status.value}")
    if sol.status is LpStatus.OPTIMAL:
        print(f"objective: {sol.objective_value:.9g}")
        print(f"x: {' '.join(f'{v:.9g}' for v in sol.x)}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="epicontrol",
        description="SIS epidemic control experiments on contact networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", required=True, help="experiment config file")
        p.add_argument("--graph", help="override graph path")
        p.add_argument("--out", help="override output directory")
        p.add_argument("--seed", type=int, help="override base seed")
        p.add_argument("--jobs", type=int, help="parallel runs")

    p = sub.add_parser("compare", help="full budget-matched comparison")
    add_common(p)
    p.add_argument("--allow-unmatched", action="store_true",
                   help="fall back to peak-treatment scales when the budget "
                        "target is unreachable (flagged in UNMATCHED.txt)")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("simulate", help="run one policy batch")
    add_common(p)
    p.add_argument("--policy", required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--budget", type=float, default=None)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="compare across the q_x grid")
    add_common(p)
    p.add_argument("--allow-unmatched", action="store_true")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("calibrate", help="budget-match baselines only")
    add_common(p)
    p.add_argument("--policy", help="calibrate a single policy")
    p.set_defaults(func=_cmd_calibrate)

    p = sub.add_parser("policy-debug",
                       help="print d, lambda*, and HJB residuals for a snapshot")
    p.add_argument("--graph", required=True)
    p.add_argument("--infected", required=True,
                   help="comma-separated node labels or indices")
    p.add_argument("--beta", type=float, default=6.0)
    p.add_argument("--gamma", type=float, default=5.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--rho", type=float, default=5.0)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--q-lambda", type=float, default=1.0)
    p.add_argument("--q-x", type=float, default=400.0)
    p.set_defaults(func=_cmd_policy_debug)

    p = sub.add_parser("lp-check", help="solve an LP from a text file "
                       "(objective line, then rows 'g... h' meaning gx >= h)")
    p.add_argument("file")
    p.set_defaults(func=_cmd_lp_check)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except CalibrationError as exc:
        print(f"calibration failure: {exc}", file=sys.stderr)
        return 3
    except (InvariantViolationError, NumericalError) as exc:
        print(f"numerical invariant violation: {exc}", file=sys.stderr)
        return 4
    except EpicontrolError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
