"""Epidemic state and jump dynamics.

State vectors: X (infected), H (under treatment), Z = A^T X (infected
neighbor counts), M = A^T H (treated neighbor counts). Counters Y, W, N
accumulate infection, recovery, and treatment-start events per node.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllegalTransitionError,
    InvariantViolationError,
    ParameterError,
    TimeOrderError,
)

# When True, every apply_event recomputes Z and M from scratch and checks
# them against the incremental values (slow; used by consistency tests).
DEBUG_RECOMPUTE = False


@dataclass(frozen=True)
class ModelParams:
    """Disease rates: infection per infected neighbor (beta), infection
    reduction per treated neighbor (gamma), spontaneous recovery (delta),
    and treatment recovery boost (rho)."""

    beta: float
    gamma: float
    delta: float
    rho: float

    def __post_init__(self):
        for name in ("beta", "gamma", "delta", "rho"):
            if getattr(self, name) < 0:
                raise ParameterError(f"{name} must be nonnegative")
        if self.gamma > self.beta:
            raise ParameterError("gamma must not exceed beta")


class ControlParams:
    """Control-cost weights and discount rate.

    q_lambda and q_x are per-node vectors (scalars broadcast to length n).
    eta must be strictly positive: the policy constants divide by it.
    """

    def __init__(self, q_lambda, q_x, eta, n=None):
        q_lambda = np.atleast_1d(np.asarray(q_lambda, dtype=float))
        q_x = np.atleast_1d(np.asarray(q_x, dtype=float))
        if n is not None:
            if q_lambda.size == 1:
                q_lambda = np.full(n, q_lambda[0])
            if q_x.size == 1:
                q_x = np.full(n, q_x[0])
        if q_lambda.shape != q_x.shape:
            raise ParameterError("q_lambda and q_x must have matching length")
        if np.any(q_lambda <= 0):
            raise ParameterError("q_lambda entries must be positive")
        if np.any(q_x < 0):
            raise ParameterError("q_x entries must be nonnegative")
        if eta <= 0:
            raise ParameterError("eta must be strictly positive")
        q_lambda.setflags(write=False)
        q_x.setflags(write=False)
        self.q_lambda = q_lambda
        self.q_x = q_x
        self.eta = float(eta)

    def __repr__(self):
        return (
            f"ControlParams(q_lambda~{self.q_lambda.mean():g}, "
            f"q_x~{self.q_x.mean():g}, eta={self.eta:g})"
        )


class EventKind(enum.Enum):
    INFECTION = "I"
    RECOVERY = "R"
    TREATMENT_START = "T"


@dataclass(frozen=True)
class Event:
    t: float
    node: int
    kind: EventKind


@dataclass
class EpidemicState:
    """Full epidemic state at time t. Confined to a single run."""

    t: float
    X: np.ndarray
    H: np.ndarray
    Z: np.ndarray
    M: np.ndarray
    Y: np.ndarray
    W: np.ndarray
    N: np.ndarray
    X0: np.ndarray = field(repr=False, default=None)

    @property
    def n(self):
        return self.X.shape[0]

    def copy(self):
        return EpidemicState(
            self.t, self.X.copy(), self.H.copy(), self.Z.copy(), self.M.copy(),
            self.Y.copy(), self.W.copy(), self.N.copy(), self.X0.copy(),
        )


def init_state(net, initially_infected):
    """Fresh state at t = 0 with the given nodes infected, nobody treated."""
    n = net.node_count
    X = np.zeros(n, dtype=np.int64)
    for i in initially_infected:
        if not 0 <= i < n:
            raise IndexError(f"initial infection index {i} out of range")
        X[i] = 1
    Z = net.adjacency.T @ X
    zeros = np.zeros(n, dtype=np.int64)
    return EpidemicState(
        t=0.0, X=X, H=zeros.copy(), Z=Z, M=zeros.copy(),
        Y=zeros.copy(), W=zeros.copy(), N=zeros.copy(), X0=X.copy(),
    )


def apply_event(state, net, ev):
    """Apply one jump to the state in place and return it.

    Infection flips X to 1, recovery flips X to 0 (ending treatment if
    active), treatment-start flips H to 1. Z and M are maintained
    incrementally over the node's neighbors.
    """
    if ev.t < state.t:
        raise TimeOrderError(f"event at t={ev.t} precedes state time {state.t}")
    i = ev.node
    nbrs = net.neighbors(i)

    if ev.kind is EventKind.INFECTION:
        if state.X[i] != 0:
            raise IllegalTransitionError(i, ev.kind.name, "node already infected")
        state.X[i] = 1
        state.Z[nbrs] += 1
        state.Y[i] += 1
    elif ev.kind is EventKind.RECOVERY:
        if state.X[i] != 1:
            raise IllegalTransitionError(i, ev.kind.name, "node not infected")
        state.X[i] = 0
        state.Z[nbrs] -= 1
        if state.H[i] == 1:
            # Treatment ends exactly at recovery: H and M jump with the
            # same recovery event.
            state.H[i] = 0
            state.M[nbrs] -= 1
        state.W[i] += 1
    elif ev.kind is EventKind.TREATMENT_START:
        if state.X[i] != 1:
            raise IllegalTransitionError(i, ev.kind.name, "node not infected")
        if state.H[i] != 0:
            raise IllegalTransitionError(i, ev.kind.name, "node already treated")
        state.H[i] = 1
        state.M[nbrs] += 1
        state.N[i] += 1
    else:
        raise ValueError(f"unknown event kind {ev.kind!r}")

    state.t = ev.t
    if DEBUG_RECOMPUTE:
        _check_consistency(state, net)
    return state


def _check_consistency(state, net):
    A = net.adjacency
    if not np.array_equal(state.Z, A.T @ state.X):
        raise InvariantViolationError("Z diverged from A^T X")
    if not np.array_equal(state.M, A.T @ state.H):
        raise InvariantViolationError("M diverged from A^T H")
    if np.any(state.H > state.X):
        raise InvariantViolationError("treated node is not infected")
    if not np.array_equal(state.X, state.X0 + state.Y - state.W):
        raise InvariantViolationError("X diverged from X0 + Y - W")
    for name in ("X", "H"):
        v = getattr(state, name)
        if v.min() < 0 or v.max() > 1:
            raise InvariantViolationError(f"{name} left {{0,1}}")


def intensities(state, net, mp, treat_rates):
    """Per-node event rates given the current treatment control.

    Returns (infection, recovery, treatment) vectors:
      infection[i] = (1 - X_i)(beta Z_i - gamma M_i)
      recovery[i]  = X_i (delta + rho H_i)
      treatment[i] = treat_rates[i] X_i (1 - H_i)
    """
    treat_rates = np.asarray(treat_rates, dtype=float)
    if np.any(treat_rates < 0):
        raise ParameterError("treatment rates must be nonnegative")
    infection = (1 - state.X) * (mp.beta * state.Z - mp.gamma * state.M)
    if np.any(infection < -1e-12):
        raise InvariantViolationError(
            "negative infection rate; state corrupted (M > Z with gamma <= beta?)"
        )
    np.maximum(infection, 0.0, out=infection)
    recovery = state.X * (mp.delta + mp.rho * state.H)
    treatment = treat_rates * state.X * (1 - state.H)
    return infection, recovery, treatment
