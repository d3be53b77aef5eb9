"""HJB-derived treatment policy.

The value function is linear in the state vectors, V = b.X + c.H + d.Z + f.M,
with constant vectors determined (up to the free part d on susceptible
indices) by the model parameters. d is recomputed online, whenever the
infection pattern X changes, by a small LP that keeps the closed-form
intensity real while intervening minimally. The optimal treatment intensity
then follows in closed form from five parameter constants k1..k5.
"""

from dataclasses import dataclass

import numpy as np

from . import lp as lp_mod
from .errors import InvariantViolationError, ParameterError, PolicyError
from .lp import LinearProgram, LpStatus

RADICAL_CLAMP_TOL = 1e-9


@dataclass(frozen=True)
class PolicyConstants:
    """Scalar/vector constants of the closed-form intensity.

    k1 = beta (2 delta + eta + rho)
    k2_i = beta (delta + eta)(delta + eta + rho) q_lambda_i
    k3 = eta (gamma (delta + eta) + beta (delta + rho))
    k4_i = beta (delta + rho) q_x_i
    k5 = gamma eta + beta (2 delta + rho)   (computed for completeness; the
         intensity formula and the LP never reference it)
    """

    k1: float
    k2: np.ndarray
    k3: float
    k4: np.ndarray
    k5: float


@dataclass
class ValueConstants:
    """Per-node constant vectors of the linear value function."""

    b: np.ndarray
    c: np.ndarray
    d: np.ndarray
    f: np.ndarray


def compute_constants(mp, cp):
    """Evaluate the five policy constants from model and control params."""
    if cp.eta <= 0:
        raise ParameterError("policy constants require eta > 0")
    beta, gamma, delta, rho, eta = mp.beta, mp.gamma, mp.delta, mp.rho, cp.eta
    return PolicyConstants(
        k1=beta * (2 * delta + eta + rho),
        k2=beta * (delta + eta) * (delta + eta + rho) * cp.q_lambda,
        k3=eta * (gamma * (delta + eta) + beta * (delta + rho)),
        k4=beta * (delta + rho) * cp.q_x,
        k5=gamma * eta + beta * (2 * delta + rho),
    )


def solve_policy_lp(net, X, pc, lp_solve=lp_mod.solve):
    """Recompute the d vector for the current infection pattern.

    Minimizes the total slack of A_inf_sus d_sus >= -k4_inf / k3 over the
    susceptible entries of d. Because the constraint forces every residual
    nonnegative, the L1 objective reduces to the linear form
    sum(A_inf_sus d_sus). Infected entries of d are zero by construction;
    susceptible nodes without infected neighbors have a zero column and are
    pinned to zero as well.

    Returns (d, lp_objective) where lp_objective is the optimal value of the
    reduced linear objective (recorded for reproducibility across solvers
    with multiple optima).
    """
    if pc.k3 <= 0:
        raise ParameterError("policy LP requires k3 > 0 (degenerate rates)")
    X = np.asarray(X)
    n = net.node_count
    d = np.zeros(n)
    infected = np.flatnonzero(X == 1)
    susceptible = np.flatnonzero(X == 0)
    if infected.size == 0 or susceptible.size == 0:
        return d, 0.0

    A_is = net.adjacency[np.ix_(infected, susceptible)].astype(float)
    active = np.flatnonzero(A_is.sum(axis=0) > 0)
    if active.size == 0:
        return d, 0.0
    A_act = A_is[:, active]
    rhs = -pc.k4[infected] / pc.k3

    lp = LinearProgram(
        objective=A_act.sum(axis=0),
        constraints_matrix=A_act,
        constraints_rhs=rhs,
    )
    sol = lp_solve(lp)
    if sol.status is not LpStatus.OPTIMAL:
        # d = 0 is always feasible and the objective is bounded below by
        # sum(rhs), so any non-optimal status means the solver broke.
        raise PolicyError(f"policy LP returned {sol.status.value}")
    d[susceptible[active]] = sol.x
    return d, sol.objective_value


def _radical(net, pc, cp, d, infected):
    """Radicand of the closed-form intensity on the given infected indices."""
    a = net.adjacency[infected] @ d
    return 2.0 * pc.k1 * cp.q_lambda[infected] * (pc.k3 * a + pc.k4[infected]) \
        + pc.k2[infected] ** 2


def optimal_intensity(state, net, pc, cp, d):
    """Closed-form optimal treatment intensity for the current state.

    Zero on healthy and already-treated nodes; on infected untreated nodes
    lambda_i = (sqrt(radical_i) - k2_i) / (k1 q_lambda_i), which the LP
    constraint keeps nonnegative and real.
    """
    lam = np.zeros(net.node_count)
    infected = np.flatnonzero((state.X == 1) & (state.H == 0))
    if infected.size == 0:
        return lam
    rad = _radical(net, pc, cp, d, infected)
    if np.any(rad < -RADICAL_CLAMP_TOL):
        raise InvariantViolationError(
            f"negative radical {rad.min():g}: d inconsistent with X"
        )
    np.maximum(rad, 0.0, out=rad)
    lam[infected] = np.maximum(
        (np.sqrt(rad) - pc.k2[infected]) / (pc.k1 * cp.q_lambda[infected]), 0.0
    )
    return lam


def compute_value_constants(net, X, d, mp, cp):
    """Fill in b, c, f (and echo d) for the current infection pattern.

    Susceptible entries follow the linear relations
      f = -(gamma/beta) d,  b = (eta/beta) d - (A d),  c = -(A f),
    so that the treatment jump of V vanishes on susceptible nodes. Infected
    entries take the negative root of the quadratic for the treatment jump,
    from which c and then b follow.
    """
    if mp.beta <= 0:
        raise ParameterError("value constants require beta > 0")
    X = np.asarray(X)
    d = np.asarray(d, dtype=float)
    n = net.node_count
    A = net.adjacency.astype(float)
    pc = compute_constants(mp, cp)

    sus = X == 0
    inf = ~sus
    Ad = A @ d

    b = np.zeros(n)
    c = np.zeros(n)
    f = np.zeros(n)

    f[sus] = -(mp.gamma / mp.beta) * d[sus]
    b[sus] = (cp.eta / mp.beta) * d[sus] - Ad[sus]
    # c on susceptible nodes cancels the treatment jump: c = -(A f).
    # f vanishes on infected nodes, so (A f) restricted to susceptible rows
    # only sees susceptible columns.

    infected = np.flatnonzero(inf)
    if infected.size:
        rad = _radical(net, pc, cp, d, infected)
        if np.any(rad < -RADICAL_CLAMP_TOL):
            raise InvariantViolationError("negative radical: d infeasible for X")
        jump = (pc.k2[infected] - np.sqrt(np.maximum(rad, 0.0))) / pc.k1
        a = Ad[infected]
        # treatment jump = c + (A f); recover c, then b from the linear
        # infected-node equation.
        f_row = A[infected] @ f  # uses susceptible f just assigned
        c[infected] = jump - f_row
        b[infected] = (
            cp.q_x[infected] - mp.delta * a
            - 0.5 * jump**2 / cp.q_lambda[infected]
        ) / (cp.eta + mp.delta)

    c[sus] = -(A @ f)[sus]
    return ValueConstants(b=b, c=c, d=d.copy(), f=f)


@dataclass
class HjbResiduals:
    """Absolute residuals of the four stationarity equations, per node.

    Susceptible nodes carry the two d/f relations; infected nodes carry the
    coupled quadratic equations for c and b. Entries off a node's case are
    zero.
    """

    sus_balance: np.ndarray
    sus_coupling: np.ndarray
    inf_treatment: np.ndarray
    inf_infection: np.ndarray

    @property
    def max_residual(self):
        return float(
            max(
                np.abs(self.sus_balance).max(initial=0.0),
                np.abs(self.sus_coupling).max(initial=0.0),
                np.abs(self.inf_treatment).max(initial=0.0),
                np.abs(self.inf_infection).max(initial=0.0),
            )
        )


def hjb_residuals(vc, net, X, mp, cp):
    """Evaluate the stationarity equations at the given value constants.

    All four residual families are analytically zero when the constants are
    computed exactly; nonzero values expose construction bugs.
    """
    X = np.asarray(X)
    n = net.node_count
    A = net.adjacency.astype(float)
    b, c, d, f = vc.b, vc.c, vc.d, vc.f
    Ad = A @ d
    Af = A @ f

    sus_balance = np.zeros(n)
    sus_coupling = np.zeros(n)
    inf_treatment = np.zeros(n)
    inf_infection = np.zeros(n)

    sus = np.flatnonzero(X == 0)
    inf = np.flatnonzero(X == 1)

    sus_balance[sus] = -cp.eta * d[sus] + mp.beta * (b[sus] + Ad[sus])
    if mp.gamma > 0:
        sus_coupling[sus] = d[sus] + (mp.beta / mp.gamma) * f[sus]
    else:
        sus_coupling[sus] = mp.gamma * d[sus] + mp.beta * f[sus]

    if inf.size:
        jump = c[inf] + Af[inf]
        q_inv = 1.0 / cp.q_lambda[inf]
        inf_treatment[inf] = (
            -cp.eta * c[inf]
            - (mp.delta + mp.rho) * jump
            - (mp.delta + mp.rho) * (b[inf] + Ad[inf])
            + 0.5 * q_inv * jump**2
        )
        inf_infection[inf] = (
            -cp.eta * b[inf]
            - mp.delta * (b[inf] + Ad[inf])
            - 0.5 * q_inv * jump**2
            + cp.q_x[inf]
        )
    return HjbResiduals(sus_balance, sus_coupling, inf_treatment, inf_infection)


def treatment_jump(vc, net):
    """Treatment jump of the value function, c + A f, per node."""
    return vc.c + net.adjacency.astype(float) @ vc.f


class SocController:
    """Stateful runtime for the closed-form policy inside a simulation.

    Caches the LP solution d and re-solves exactly when the infection
    pattern X changes (never on treatment-start events). lp_solve_count
    instruments the re-solve trigger for tests.
    """

    def __init__(self, net, mp, cp, lp_solve=lp_mod.solve):
        self.net = net
        self.cp = cp
        self.pc = compute_constants(mp, cp)
        self._lp_solve = lp_solve
        self._d = None
        self._last_X = None
        self.last_lp_objective = None
        self.lp_solve_count = 0

    def treat_rates(self, state):
        if self._last_X is None or not np.array_equal(state.X, self._last_X):
            self._d, self.last_lp_objective = solve_policy_lp(
                self.net, state.X, self.pc, self._lp_solve
            )
            self._last_X = state.X.copy()
            self.lp_solve_count += 1
        return optimal_intensity(state, self.net, self.pc, self.cp, self._d)

    @property
    def d(self):
        return self._d
