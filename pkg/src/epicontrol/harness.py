"""Experiment orchestration: config parsing, batch running, calibration,
and all CSV outputs.

Protocol of the `compare` command: run the optimal-control batch, take its
mean treatment count as the budget target, calibrate the plain baselines'
scales to that target (same seed block as their final batches, so the
recorded achieved value IS the final batch mean), set the front-loaded
budgets to the target, run every policy batch, aggregate.
"""

import os
import shutil
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .baselines import (
    PolicyKind,
    PolicySpec,
    best_effort_scale,
    calibrate_scale,
)
from .dynamics import ControlParams, EventKind, ModelParams
from .errors import CalibrationError, ConfigError, ParameterError
from .graph import load_edge_list_file, spectral_drop_scores
from .metrics import aggregate
from .sim import RunConfig, run

POLICY_SEED_BLOCK = 10**6
DEFAULT_POLICIES = (
    "SOC", "T", "T-FL", "MN", "MN-FL", "LN", "LN-FL", "LRSR",
)
DEFAULT_SWEEP = (1.0, 10.0, 50.0, 100.0, 200.0, 400.0, 600.0, 1000.0)


@dataclass
class ExperimentConfig:
    graph_path: str
    beta: float
    gamma: float
    delta: float
    rho: float
    eta: float
    q_lambda: float
    q_x: float
    t_final: float = 10.0
    runs_per_policy: int = 50
    base_seed: int = 0
    initial_infected_count: int = 10
    policies: tuple = DEFAULT_POLICIES
    q_x_sweep: tuple = None
    output_dir: str = "out"
    allow_unmatched: bool = False
    jobs: int = 1

    def __post_init__(self):
        if self.runs_per_policy < 1:
            raise ConfigError("must be >= 1", key="runs_per_policy")
        try:
            self.model_params()
        except ParameterError as exc:
            raise ConfigError(str(exc), key="beta/gamma/delta/rho") from exc
        if self.eta <= 0:
            raise ConfigError("must be > 0 (policy divides by eta)", key="eta")
        if self.q_lambda <= 0:
            raise ConfigError("must be > 0", key="q_lambda")
        if self.q_x < 0:
            raise ConfigError("must be >= 0", key="q_x")
        if self.t_final <= 0:
            raise ConfigError("must be > 0", key="t_final")
        for label in self.policies:
            PolicyKind.from_label(label)

    def model_params(self):
        return ModelParams(self.beta, self.gamma, self.delta, self.rho)

    def control_params(self, n, q_x=None):
        return ControlParams(
            q_lambda=self.q_lambda,
            q_x=self.q_x if q_x is None else q_x,
            eta=self.eta,
            n=n,
        )


_CONFIG_KEYS = {
    "graph": ("graph_path", str),
    "beta": ("beta", float),
    "gamma": ("gamma", float),
    "delta": ("delta", float),
    "rho": ("rho", float),
    "eta": ("eta", float),
    "q_lambda": ("q_lambda", float),
    "q_x": ("q_x", float),
    "t_final": ("t_final", float),
    "runs_per_policy": ("runs_per_policy", int),
    "base_seed": ("base_seed", int),
    "initial_infected_count": ("initial_infected_count", int),
    "policies": ("policies", "list_str"),
    "q_x_sweep": ("q_x_sweep", "list_float"),
    "output_dir": ("output_dir", str),
    "allow_unmatched": ("allow_unmatched", "bool"),
    "jobs": ("jobs", int),
}
_REQUIRED = ("graph", "beta", "gamma", "delta", "rho", "eta", "q_lambda", "q_x")


def parse_config(text):
    """Parse flat `key = value` config text (one key per line, # comments)."""
    raw = {}
    for line_no, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {line_no}: expected 'key = value'")
        key, value = (part.strip() for part in stripped.split("=", 1))
        if key not in _CONFIG_KEYS:
            raise ConfigError("unknown key", key=key)
        if key in raw:
            raise ConfigError("duplicate key", key=key)
        raw[key] = (value, line_no)

    for key in _REQUIRED:
        if key not in raw:
            raise ConfigError("missing required key", key=key)

    kwargs = {}
    for key, (value, line_no) in raw.items():
        field_name, kind = _CONFIG_KEYS[key]
        try:
            if kind is str:
                kwargs[field_name] = value
            elif kind is float:
                kwargs[field_name] = float(value)
            elif kind is int:
                kwargs[field_name] = int(value)
            elif kind == "bool":
                if value.lower() not in ("true", "false", "0", "1"):
                    raise ValueError(value)
                kwargs[field_name] = value.lower() in ("true", "1")
            elif kind == "list_str":
                kwargs[field_name] = tuple(
                    p.strip() for p in value.split(",") if p.strip()
                )
            elif kind == "list_float":
                kwargs[field_name] = tuple(
                    float(p) for p in value.split(",") if p.strip()
                )
        except ValueError as exc:
            raise ConfigError(f"line {line_no}: cannot parse {value!r}", key=key) from exc

    if float(kwargs.get("gamma", 0.0)) > float(kwargs.get("beta", 0.0)):
        raise ConfigError("gamma must not exceed beta", key="gamma")
    return ExperimentConfig(**kwargs)


def parse_config_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# One-run payload executed possibly in a worker process.
_WORKER = {}


def _init_worker(net, mp, cp, t_final, drop_scores):
    _WORKER.update(
        net=net, mp=mp, cp=cp, t_final=t_final, drop_scores=drop_scores
    )


def _run_one(task):
    spec, run_id, seed, initial = task
    cfg = RunConfig(
        policy=spec,
        mp=_WORKER["mp"],
        cp=_WORKER["cp"],
        t_final=_WORKER["t_final"],
        seed=seed,
        initial_infected=initial,
    )
    res = run(cfg, _WORKER["net"], drop_scores=_WORKER["drop_scores"])
    event_rows = [(run_id, 0.0, int(i), "I") for i in sorted(initial)]
    event_rows += [
        (run_id, ev.t, ev.node, ev.kind.value) for ev in res.events
    ]
    return run_id, seed, res.metrics, event_rows


class BatchRunner:
    """Runs seed blocks of simulations for one experiment, optionally in
    parallel; results always merge in run-index order."""

    def __init__(self, net, mp, cp, t_final, jobs=1, drop_scores=None):
        self.net = net
        self.mp = mp
        self.cp = cp
        self.t_final = t_final
        self.jobs = max(1, jobs)
        self.drop_scores = drop_scores

    def run_batch(self, spec, seeds, initials):
        tasks = [
            (spec, r, seeds[r], initials[r]) for r in range(len(seeds))
        ]
        if self.jobs == 1:
            _init_worker(self.net, self.mp, self.cp, self.t_final, self.drop_scores)
            return [_run_one(t) for t in tasks]
        with ProcessPoolExecutor(
            max_workers=self.jobs,
            initializer=_init_worker,
            initargs=(self.net, self.mp, self.cp, self.t_final, self.drop_scores),
        ) as pool:
            return list(pool.map(_run_one, tasks))

    def mean_treatments(self, spec, seeds, initials):
        results = self.run_batch(spec, seeds, initials)
        return float(np.mean([m.total_treatments for _, _, m, _ in results]))


def _fmt(x):
    return repr(float(x))


def _write_summary(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,run_id,seed,coverage,peak_infected,total_treatments,"
                 "discounted_cost\n")
        for policy, run_id, seed, m in rows:
            fh.write(
                f"{policy},{run_id},{seed},{_fmt(m.total_infection_coverage)},"
                f"{m.peak_infected},{m.total_treatments},"
                f"{_fmt(m.discounted_cost)}\n"
            )


def _write_timeseries(path, stats_by_policy):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,t,mean_infected,ci_lo,ci_hi\n")
        for policy, stats in stats_by_policy:
            for t, mean, lo, hi in zip(
                stats.grid, stats.infected_mean,
                stats.infected_ci_lo, stats.infected_ci_hi,
            ):
                fh.write(
                    f"{policy},{_fmt(t)},{_fmt(mean)},{_fmt(lo)},{_fmt(hi)}\n"
                )


def _write_calibration(path, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("policy,scale,target,achieved,batch,seed0\n")
        for policy, scale, target, achieved, batch, seed0 in rows:
            fh.write(
                f"{policy},{_fmt(scale)},{_fmt(target)},{_fmt(achieved)},"
                f"{batch},{seed0}\n"
            )


def _write_events(events_dir, policy, batch_results):
    policy_dir = os.path.join(events_dir, policy)
    os.makedirs(policy_dir, exist_ok=True)
    for run_id, _, _, event_rows in batch_results:
        path = os.path.join(policy_dir, f"{run_id}.csv")
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("run_id,t,node,kind\n")
            for rid, t, node, kind in event_rows:
                fh.write(f"{rid},{t:.9g},{node},{kind}\n")


@dataclass
class ExperimentResult:
    output_dir: str
    target_treatments: float
    stats: dict  # policy label -> BatchStats
    calibration: list  # calibration.csv rows
    unmatched: list = field(default_factory=list)


def run_experiment(cfg):
    """Full comparison protocol; writes summary, timeseries, calibration,
    and event logs under cfg.output_dir. Returns an ExperimentResult."""
    net = load_edge_list_file(cfg.graph_path)
    n = net.node_count
    if cfg.initial_infected_count > n:
        raise ConfigError("more initial infections than nodes",
                          key="initial_infected_count")
    mp = cfg.model_params()
    cp = cfg.control_params(n)
    labels = list(cfg.policies)
    kinds = [PolicyKind.from_label(p) for p in labels]
    needs_scores = any(k is PolicyKind.SPECTRAL for k in kinds)
    drop_scores = spectral_drop_scores(net) if needs_scores else None
    runner = BatchRunner(net, mp, cp, cfg.t_final, cfg.jobs, drop_scores)

    R = cfg.runs_per_policy
    initials = [
        tuple(
            int(i)
            for i in np.random.default_rng(cfg.base_seed + r).choice(
                n, size=cfg.initial_infected_count, replace=False
            )
        )
        for r in range(R)
    ]
    seeds_for = lambda p_index: [
        cfg.base_seed + p_index * POLICY_SEED_BLOCK + r for r in range(R)
    ]

    if "SOC" not in labels:
        raise ConfigError("compare protocol requires the SOC policy",
                          key="policies")
    os.makedirs(cfg.output_dir, exist_ok=True)
    events_dir = os.path.join(cfg.output_dir, "events")
    shutil.copyfile(cfg.graph_path,
                    os.path.join(cfg.output_dir, "graph.edgelist"))

    soc_index = labels.index("SOC")
    soc_spec = PolicySpec(PolicyKind.SOC)
    soc_results = runner.run_batch(soc_spec, seeds_for(soc_index), initials)
    target = float(np.mean([m.total_treatments for _, _, m, _ in soc_results]))

    batch_results = {"SOC": soc_results}
    calibration_rows = []
    unmatched = []
    specs = {"SOC": soc_spec}

    for p_index, (label, kind) in enumerate(zip(labels, kinds)):
        if kind is PolicyKind.SOC:
            continue
        seeds = seeds_for(p_index)
        if kind.front_loaded:
            specs[label] = PolicySpec(kind, scale=1.0, budget=target)
            continue
        base = PolicySpec(kind, scale=1.0)
        eval_runner = lambda s, b, _seeds=seeds: runner.mean_treatments(
            s, _seeds[:b], initials[:b]
        )
        if cfg.allow_unmatched:
            spec, achieved, matched = best_effort_scale(
                base, target, eval_runner, R
            )
            if not matched:
                unmatched.append(label)
        else:
            spec, achieved = calibrate_scale(base, target, eval_runner, R)
        specs[label] = spec
        calibration_rows.append(
            (label, spec.scale, target, achieved, R, seeds[0])
        )

    for p_index, label in enumerate(labels):
        if label in batch_results:
            continue
        batch_results[label] = runner.run_batch(
            specs[label], seeds_for(p_index), initials
        )

    # front-loaded policies record their realized counts alongside the target
    for p_index, (label, kind) in enumerate(zip(labels, kinds)):
        if kind.front_loaded:
            achieved = float(np.mean(
                [m.total_treatments for _, _, m, _ in batch_results[label]]
            ))
            calibration_rows.append(
                (label, 1.0, target, achieved, R, seeds_for(p_index)[0])
            )

    summary_rows = []
    stats_by_policy = []
    for p_index, label in enumerate(labels):
        results = batch_results[label]
        _write_events(events_dir, label, results)
        for run_id, seed, m, _ in results:
            summary_rows.append((label, run_id, seed, m))
        if R >= 2:
            stats_by_policy.append(
                (label, aggregate([m for _, _, m, _ in results]))
            )

    _write_summary(os.path.join(cfg.output_dir, "summary.csv"), summary_rows)
    if stats_by_policy:
        _write_timeseries(
            os.path.join(cfg.output_dir, "timeseries.csv"), stats_by_policy
        )
    _write_calibration(
        os.path.join(cfg.output_dir, "calibration.csv"), calibration_rows
    )
    if unmatched:
        flag_path = os.path.join(cfg.output_dir, "UNMATCHED.txt")
        with open(flag_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(
                "budget target %s not reachable within ±5%% for: %s\n"
                % (_fmt(target), ", ".join(unmatched))
            )

    return ExperimentResult(
        output_dir=cfg.output_dir,
        target_treatments=target,
        stats=dict(stats_by_policy),
        calibration=calibration_rows,
        unmatched=unmatched,
    )


def run_single_policy(cfg, label, scale=1.0, budget=None):
    """`simulate` command: one policy batch with the SOC seed-block layout."""
    net = load_edge_list_file(cfg.graph_path)
    n = net.node_count
    mp = cfg.model_params()
    cp = cfg.control_params(n)
    kind = PolicyKind.from_label(label)
    if kind.front_loaded and budget is None:
        raise ConfigError("front-loaded policies need an explicit budget")
    spec = PolicySpec(kind, scale=scale, budget=budget or 0.0)
    drop_scores = (
        spectral_drop_scores(net) if kind is PolicyKind.SPECTRAL else None
    )
    runner = BatchRunner(net, mp, cp, cfg.t_final, cfg.jobs, drop_scores)
    p_index = list(cfg.policies).index(label) if label in cfg.policies else 0
    R = cfg.runs_per_policy
    initials = [
        tuple(
            int(i)
            for i in np.random.default_rng(cfg.base_seed + r).choice(
                n, size=cfg.initial_infected_count, replace=False
            )
        )
        for r in range(R)
    ]
    seeds = [cfg.base_seed + p_index * POLICY_SEED_BLOCK + r for r in range(R)]
    results = runner.run_batch(spec, seeds, initials)

    os.makedirs(cfg.output_dir, exist_ok=True)
    _write_events(os.path.join(cfg.output_dir, "events"), label, results)
    _write_summary(
        os.path.join(cfg.output_dir, "summary.csv"),
        [(label, run_id, seed, m) for run_id, seed, m, _ in results],
    )
    if R >= 2:
        _write_timeseries(
            os.path.join(cfg.output_dir, "timeseries.csv"),
            [(label, aggregate([m for _, _, m, _ in results]))],
        )
    return results


def run_sweep(cfg):
    """`sweep` command: the compare protocol per q_x value, plus sweep.csv
    with per-policy coverage means and SEMs."""
    values = cfg.q_x_sweep or DEFAULT_SWEEP
    rows = []
    for q_x in values:
        sub = replace(
            cfg,
            q_x=q_x,
            output_dir=os.path.join(cfg.output_dir, f"qx_{q_x:g}"),
        )
        result = run_experiment(sub)
        for label, stats in result.stats.items():
            rows.append((q_x, label, stats.coverage_mean, stats.coverage_sem))
    path = os.path.join(cfg.output_dir, "sweep.csv")
    os.makedirs(cfg.output_dir, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("q_x,policy,coverage_mean,coverage_sem\n")
        for q_x, label, mean, sem in rows:
            fh.write(f"{_fmt(q_x)},{label},{_fmt(mean)},{_fmt(sem)}\n")
    return rows
