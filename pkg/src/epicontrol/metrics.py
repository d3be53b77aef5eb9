"""Performance measures computed from event logs."""

from dataclasses import dataclass

import numpy as np

from .dynamics import EventKind
from .errors import ParameterError

TIMESERIES_POINTS = 200


@dataclass
class MetricsSummary:
    total_infection_coverage: float
    peak_infected: int
    total_treatments: int
    discounted_cost: float
    infected_timeseries: np.ndarray  # shape (k, 2): columns t, count


def _infected_count_steps(events, X0):
    """(times, counts) with counts[i] holding on [times[i], times[i+1])."""
    count = int(np.sum(X0))
    times = [0.0]
    counts = [count]
    for ev in events:
        if ev.kind is EventKind.INFECTION:
            count += 1
        elif ev.kind is EventKind.RECOVERY:
            count -= 1
        else:
            continue
        times.append(ev.t)
        counts.append(count)
    return np.asarray(times), np.asarray(counts)


def coverage(events, X0, t_final):
    """Exact piecewise-constant integral of the infected count over [0, t_final]."""
    times, counts = _infected_count_steps(events, X0)
    edges = np.append(times, t_final)
    return float(np.sum(counts * np.diff(edges)))


def peak_infected(events, X0):
    _, counts = _infected_count_steps(events, X0)
    return int(counts.max())


def infected_counts_on_grid(events, X0, grid):
    """Right-continuous infected count sampled at the given times."""
    times, counts = _infected_count_steps(events, X0)
    idx = np.searchsorted(times, grid, side="right") - 1
    return counts[idx]


def discounted_cost(events, treat_trace, X0, cp, t_final):
    """Realized discounted loss.

    treat_trace is a list of (t_start, indices, rates) segments covering
    [0, t_final]; the control is constant within each segment. The loss per
    segment is 0.5 * sum(q_lambda rates^2) + sum(q_x X), integrated against
    exp(-eta t) in closed form.
    """
    if cp.eta <= 0:
        raise ParameterError("discounting requires eta > 0")
    eta = cp.eta
    X = np.asarray(X0, dtype=np.int64).copy()
    ev_iter = iter(events)
    pending = next(ev_iter, None)
    total = 0.0
    for k, (t_start, idx, rates) in enumerate(treat_trace):
        t_end = treat_trace[k + 1][0] if k + 1 < len(treat_trace) else t_final
        # replay events with t <= t_start so X reflects this segment
        while pending is not None and pending.t <= t_start:
            if pending.kind is EventKind.INFECTION:
                X[pending.node] = 1
            elif pending.kind is EventKind.RECOVERY:
                X[pending.node] = 0
            pending = next(ev_iter, None)
        control_cost = 0.5 * float(np.sum(cp.q_lambda[idx] * np.square(rates)))
        state_cost = float(cp.q_x @ X)
        weight = (np.exp(-eta * t_start) - np.exp(-eta * t_end)) / eta
        total += (control_cost + state_cost) * weight
    return total


def summarize(events, X0, treat_trace, cp, t_final):
    grid = np.linspace(0.0, t_final, TIMESERIES_POINTS)
    counts = infected_counts_on_grid(events, X0, grid)
    return MetricsSummary(
        total_infection_coverage=coverage(events, X0, t_final),
        peak_infected=peak_infected(events, X0),
        total_treatments=sum(
            1 for ev in events if ev.kind is EventKind.TREATMENT_START
        ),
        discounted_cost=discounted_cost(events, treat_trace, X0, cp, t_final),
        infected_timeseries=np.column_stack([grid, counts]),
    )


@dataclass
class BatchStats:
    """Per-metric mean / SEM / normal 95% CI over a batch of runs."""

    n_runs: int
    coverage_mean: float
    coverage_sem: float
    treatments_mean: float
    treatments_sem: float
    cost_mean: float
    cost_sem: float
    grid: np.ndarray
    infected_mean: np.ndarray
    infected_ci_lo: np.ndarray
    infected_ci_hi: np.ndarray


def _mean_sem(values):
    values = np.asarray(values, dtype=float)
    mean = float(values.mean())
    sem = float(values.std(ddof=1) / np.sqrt(values.size)) if values.size > 1 else 0.0
    return mean, sem


def aggregate(summaries):
    """Batch statistics over per-run metric summaries (>= 2 runs)."""
    if len(summaries) < 2:
        raise ValueError("aggregate needs at least two runs")
    cov_mean, cov_sem = _mean_sem([s.total_infection_coverage for s in summaries])
    trt_mean, trt_sem = _mean_sem([s.total_treatments for s in summaries])
    cost_mean, cost_sem = _mean_sem([s.discounted_cost for s in summaries])
    grid = summaries[0].infected_timeseries[:, 0]
    counts = np.stack([s.infected_timeseries[:, 1] for s in summaries])
    mean = counts.mean(axis=0)
    sem = counts.std(axis=0, ddof=1) / np.sqrt(counts.shape[0])
    return BatchStats(
        n_runs=len(summaries),
        coverage_mean=cov_mean,
        coverage_sem=cov_sem,
        treatments_mean=trt_mean,
        treatments_sem=trt_sem,
        cost_mean=cost_mean,
        cost_sem=cost_sem,
        grid=grid,
        infected_mean=mean,
        infected_ci_lo=mean - 1.96 * sem,
        infected_ci_hi=mean + 1.96 * sem,
    )
