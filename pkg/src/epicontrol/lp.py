"""Dense linear-program solver for the treatment policy.

Problem form: minimize c^T x subject to G x >= h with x free. Solved by a
two-phase primal simplex on the standard-form split x = u - v with surplus
variables; Bland's rule kicks in as an anti-cycling fallback.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

PIVOT_TOL = 1e-9
ITERATION_CAP = 100_000


class LpStatus(enum.Enum):
    OPTIMAL = "Optimal"
    UNBOUNDED = "Unbounded"
    INFEASIBLE = "Infeasible"


@dataclass(frozen=True)
class LinearProgram:
    """min objective . x  s.t.  constraints_matrix @ x >= constraints_rhs."""

    objective: np.ndarray
    constraints_matrix: np.ndarray
    constraints_rhs: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.objective, dtype=float))
        G = np.asarray(self.constraints_matrix, dtype=float)
        if G.size == 0:
            G = G.reshape((len(np.atleast_1d(self.constraints_rhs)), c.size))
        h = np.atleast_1d(np.asarray(self.constraints_rhs, dtype=float))
        if G.ndim != 2:
            raise ValueError("constraints_matrix must be 2-D")
        if G.shape[1] != c.size:
            raise ValueError(
                f"constraints_matrix has {G.shape[1]} columns, objective has {c.size}"
            )
        if G.shape[0] != h.size:
            raise ValueError(
                f"constraints_matrix has {G.shape[0]} rows, rhs has {h.size}"
            )
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "constraints_matrix", G)
        object.__setattr__(self, "constraints_rhs", h)

    @property
    def n_vars(self):
        return self.objective.size

    @property
    def n_constraints(self):
        return self.constraints_rhs.size


@dataclass
class LpSolution:
    x: np.ndarray
    objective_value: float
    status: LpStatus


def _pivot(T, z, basis, row, col):
    T[row] /= T[row, col]
    colvals = T[:, col].copy()
    colvals[row] = 0.0
    T -= np.outer(colvals, T[row])
    z -= z[col] * T[row]
    basis[row] = col


def _run_simplex(T, z, basis, bland_after):
    """Minimize over the tableau in place. Returns 'optimal' or 'unbounded'."""
    m = T.shape[0]
    for it in range(1, ITERATION_CAP + 1):
        bland = it > bland_after
        rc = z[:-1]
        if bland:
            negative = np.flatnonzero(rc < -PIVOT_TOL)
            if negative.size == 0:
                return "optimal"
            col = int(negative[0])
        else:
            col = int(np.argmin(rc))
            if rc[col] >= -PIVOT_TOL:
                return "optimal"
        direction = T[:, col]
        eligible = direction > PIVOT_TOL
        if not eligible.any():
            return "unbounded"
        ratios = np.full(m, np.inf)
        ratios[eligible] = T[eligible, -1] / direction[eligible]
        if bland:
            best = ratios.min()
            ties = np.flatnonzero(ratios <= best + PIVOT_TOL)
            row = int(ties[np.argmin(basis[ties])])
        else:
            row = int(np.argmin(ratios))
        _pivot(T, z, basis, row, col)
    raise NumericalError(f"simplex cycling guard exceeded ({ITERATION_CAP} pivots)")


def solve(lp, tol=1e-9):
    """Solve the LP; returns an LpSolution with status set.

    For non-Optimal statuses x is None. Optimal x satisfies G x >= h - tol
    elementwise and the objective is within solver tolerance of the optimum.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    c = lp.objective
    G = lp.constraints_matrix
    h = lp.constraints_rhs
    m, n = G.shape

    if n == 0:
        if np.all(h <= tol):
            return LpSolution(np.zeros(0), 0.0, LpStatus.OPTIMAL)
        return LpSolution(None, np.nan, LpStatus.INFEASIBLE)
    if m == 0:
        if np.all(np.abs(c) <= tol):
            return LpSolution(np.zeros(n), 0.0, LpStatus.OPTIMAL)
        return LpSolution(None, np.nan, LpStatus.UNBOUNDED)

    # Standard form: columns [u, v, s], x = u - v, G u - G v - s = h.
    n_core = 2 * n + m
    A = np.hstack([G, -G, -np.eye(m)])
    b = h.copy()
    flip = b < 0
    A[flip] *= -1.0
    b[flip] *= -1.0

    # Phase 1: artificial basis, minimize the artificial mass.
    T = np.hstack([A, np.eye(m), b[:, None]])
    basis = np.arange(n_core, n_core + m)
    cost1 = np.zeros(n_core + m + 1)
    cost1[n_core:-1] = 1.0
    z = cost1 - T.sum(axis=0)
    bland_after = 50 * (m + n_core)
    _run_simplex(T, z, basis, bland_after)  # bounded below by 0
    feas_tol = max(tol, PIVOT_TOL) * (1.0 + float(np.abs(b).max(initial=0.0)))
    if -z[-1] > feas_tol:
        return LpSolution(None, np.nan, LpStatus.INFEASIBLE)

    # Drive artificials out of the basis; drop rows that are redundant.
    keep_rows = np.ones(T.shape[0], dtype=bool)
    for r in range(T.shape[0]):
        if basis[r] >= n_core:
            pivot_cols = np.flatnonzero(np.abs(T[r, :n_core]) > PIVOT_TOL)
            if pivot_cols.size:
                _pivot(T, z, basis, r, int(pivot_cols[0]))
            else:
                keep_rows[r] = False
    T = T[keep_rows]
    basis = basis[keep_rows]

    # Phase 2 on the core columns only.
    T = np.hstack([T[:, :n_core], T[:, -1:]])
    cost2 = np.concatenate([c, -c, np.zeros(m)])
    z = np.append(cost2, 0.0)
    for r, j in enumerate(basis):
        z -= cost2[j] * T[r]
    outcome = _run_simplex(T, z, basis, bland_after)
    if outcome == "unbounded":
        return LpSolution(None, np.nan, LpStatus.UNBOUNDED)

    x_std = np.zeros(n_core)
    x_std[basis] = T[:, -1]
    x = x_std[:n] - x_std[n : 2 * n]
    return LpSolution(x, float(c @ x), LpStatus.OPTIMAL)
