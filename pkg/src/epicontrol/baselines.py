"""Comparison treatment policies and budget-matching calibration.

All baselines emit intensity only on infected, untreated nodes. The
front-loaded (FL) variants spend at the shadow-evaluated sup-norm of the
closed-form optimal intensity until a treatment budget is exhausted; the
plain variants are rescaled offline so their batch-mean treatment count
matches a target.
"""

import enum
from dataclasses import dataclass, replace

import numpy as np

from .errors import CalibrationError, ConfigError
from .graph import spectral_drop_scores
from .soc import SocController


class PolicyKind(enum.Enum):
    SOC = "SOC"
    TRIVIAL = "T"
    TRIVIAL_FL = "T-FL"
    MOST_NEIGHBORS = "MN"
    MOST_NEIGHBORS_FL = "MN-FL"
    LEAST_NEIGHBORS = "LN"
    LEAST_NEIGHBORS_FL = "LN-FL"
    SPECTRAL = "LRSR"

    @property
    def front_loaded(self):
        return self in (
            PolicyKind.TRIVIAL_FL,
            PolicyKind.MOST_NEIGHBORS_FL,
            PolicyKind.LEAST_NEIGHBORS_FL,
        )

    @classmethod
    def from_label(cls, label):
        for kind in cls:
            if kind.value == label:
                return kind
        raise ConfigError(f"unknown policy kind {label!r}", key="policies")


@dataclass(frozen=True)
class PolicySpec:
    """A policy choice plus its calibration knobs.

    scale multiplies the base intensity shape (calibrated for the plain
    baselines); budget is the expected total-treatment target that gates
    the front-loaded variants.
    """

    kind: PolicyKind
    scale: float = 1.0
    budget: float = 0.0

    def __post_init__(self):
        # scale 0 is the no-treatment edge case (calibration lower bracket)
        if self.scale < 0:
            raise ConfigError("policy scale must be nonnegative")
        if self.budget < 0:
            raise ConfigError("policy budget must be nonnegative")

    @property
    def soc_shadow(self):
        return self.kind.front_loaded


def _base_shape(kind, net, drop_scores):
    deg = net.degrees.astype(float)
    if kind in (PolicyKind.TRIVIAL, PolicyKind.TRIVIAL_FL):
        return np.ones(net.node_count)
    if kind in (PolicyKind.MOST_NEIGHBORS, PolicyKind.MOST_NEIGHBORS_FL):
        return deg
    if kind in (PolicyKind.LEAST_NEIGHBORS, PolicyKind.LEAST_NEIGHBORS_FL):
        # "+1" keeps maximum-degree nodes treatable
        return deg.max() - deg + 1.0
    if kind is PolicyKind.SPECTRAL:
        if drop_scores is None:
            raise ConfigError("LRSR needs precomputed spectral drop scores")
        return np.asarray(drop_scores, dtype=float)
    raise ConfigError(f"{kind} is not a baseline kind")


def baseline_intensity(spec, state, net, drop_scores=None, soc_ctx=None):
    """Treatment intensity of one baseline at the current state.

    Front-loaded variants require soc_ctx, a SocController evaluated in
    shadow on this same state to obtain the sup-norm of the optimal
    intensity; they emit zero once cumulative treatments exceed the budget.
    """
    eligible = (state.X * (1 - state.H)).astype(float)
    shape = _base_shape(spec.kind, net, drop_scores)
    if not spec.kind.front_loaded:
        return spec.scale * shape * eligible
    if soc_ctx is None:
        raise ConfigError(f"{spec.kind.value} requires a shadow SOC context")
    if state.N.sum() > spec.budget:
        return np.zeros(net.node_count)
    sup = float(np.max(soc_ctx.treat_rates(state)))
    return spec.scale * shape * sup * eligible


class BaselineController:
    """Per-run policy runtime; holds the (optional) shadow SOC context."""

    def __init__(self, spec, net, mp, cp, drop_scores=None):
        self.spec = spec
        self.net = net
        if spec.kind is PolicyKind.SPECTRAL and drop_scores is None:
            drop_scores = spectral_drop_scores(net)
        self.drop_scores = drop_scores
        self.shadow = SocController(net, mp, cp) if spec.soc_shadow else None

    def treat_rates(self, state):
        return baseline_intensity(
            self.spec, state, self.net, self.drop_scores, self.shadow
        )


def make_controller(spec, net, mp, cp, drop_scores=None):
    if spec.kind is PolicyKind.SOC:
        return SocController(net, mp, cp)
    return BaselineController(spec, net, mp, cp, drop_scores)


def calibrate_scale(
    spec, target_treatments, runner, batch, tol_frac=0.05, max_iters=40
):
    """Rescale a plain baseline to match a target mean treatment count.

    runner(spec, batch) must return the batch-mean total treatments using a
    fixed seed set (common random numbers across candidate scales), under
    which the count is monotone in the scale. A geometric expansion brackets
    the target, then bisection closes in.

    Returns (calibrated_spec, achieved_mean).
    """
    if spec.kind.front_loaded or spec.kind is PolicyKind.SOC:
        raise ConfigError(f"{spec.kind.value} is not scale-calibrated")
    if target_treatments <= 0:
        raise CalibrationError("target treatment count must be positive")

    def within(mean):
        return abs(mean - target_treatments) / target_treatments <= tol_frac

    hi = spec.scale
    hi_mean = runner(replace(spec, scale=hi), batch)
    if within(hi_mean):
        return replace(spec, scale=hi), hi_mean

    lo, lo_mean = 0.0, 0.0  # zero scale treats nobody
    best_mean, best_scale = hi_mean, hi
    expansions = 0
    while hi_mean < target_treatments:
        lo, lo_mean = hi, hi_mean
        hi *= 2.0
        expansions += 1
        if expansions > max_iters:
            raise CalibrationError(
                f"could not bracket target {target_treatments:g}: "
                f"mean plateaued at {hi_mean:g} by scale {lo:g}"
            )
        hi_mean = runner(replace(spec, scale=hi), batch)
        if within(hi_mean):
            return replace(spec, scale=hi), hi_mean
        if hi_mean > best_mean:
            best_mean, best_scale = hi_mean, hi
        elif hi_mean < 0.9 * best_mean:
            # past the response peak: stronger treatment now extinguishes
            # the epidemic and the count falls, so the target is unreachable
            raise CalibrationError(
                f"target {target_treatments:g} unreachable: treatments peak "
                f"near {best_mean:g} (scale {best_scale:g}) then fall as the "
                f"epidemic dies out"
            )

    for _ in range(max_iters):
        mid = 0.5 * (lo + hi)
        mid_mean = runner(replace(spec, scale=mid), batch)
        if within(mid_mean):
            return replace(spec, scale=mid), mid_mean
        if mid_mean < target_treatments:
            lo, lo_mean = mid, mid_mean
        else:
            hi, hi_mean = mid, mid_mean
    raise CalibrationError(
        f"bisection did not reach ±{tol_frac:.0%} of {target_treatments:g} "
        f"within {max_iters} iterations (bracket means [{lo_mean:g}, {hi_mean:g}])"
    )


def best_effort_scale(spec, target_treatments, runner, batch, tol_frac=0.05):
    """Calibrate if possible; otherwise return the peak-treatment scale.

    Falls back to a geometric scan for the scale maximizing the batch-mean
    treatment count when the target sits above the achievable peak.
    Returns (spec, achieved_mean, matched_flag).
    """
    memo = {}

    def cached(s, b):
        key = (s.scale, b)
        if key not in memo:
            memo[key] = runner(s, b)
        return memo[key]

    try:
        out, achieved = calibrate_scale(
            spec, target_treatments, cached, batch, tol_frac
        )
        return out, achieved, True
    except CalibrationError:
        pass
    scales = [spec.scale * 2.0**k for k in range(-3, 12)]
    means = [cached(replace(spec, scale=s), batch) for s in scales]
    k = int(np.argmax(means))
    # one refinement pass between the peak's neighbors
    lo = scales[max(k - 1, 0)]
    hi = scales[min(k + 1, len(scales) - 1)]
    best_scale, best_mean = scales[k], means[k]
    for s in np.linspace(lo, hi, 5)[1:-1]:
        m = cached(replace(spec, scale=float(s)), batch)
        if m > best_mean:
            best_scale, best_mean = float(s), m
    matched = abs(best_mean - target_treatments) / target_treatments <= tol_frac
    return replace(spec, scale=best_scale), best_mean, matched
