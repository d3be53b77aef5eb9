import numpy as np
import pytest

from epicontrol.lp import LinearProgram, LpStatus, solve

from oracles import minimize_by_enumeration


def lp(c, G, h):
    return LinearProgram(
        objective=np.asarray(c, dtype=float),
        constraints_matrix=np.asarray(G, dtype=float).reshape(len(h), len(c)),
        constraints_rhs=np.asarray(h, dtype=float),
    )


class TestBasics:
    def test_single_lower_bound(self):
        sol = solve(lp([1.0], [[1.0]], [3.0]))
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x == pytest.approx([3.0], abs=1e-9)
        assert sol.objective_value == pytest.approx(3.0, abs=1e-9)

    def test_two_variable_facet(self):
        # min x1 + x2 s.t. x1 >= -1, x2 >= -1, x1 + x2 >= -1
        # optimum -1 on the binding facet (value verified by grid search
        # when this test was written; vertex oracle agrees below)
        sol = solve(lp([1.0, 1.0], [[1, 0], [0, 1], [1, 1]], [-1.0, -1.0, -1.0]))
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective_value == pytest.approx(-1.0, abs=1e-9)
        status, value = minimize_by_enumeration(
            np.array([1.0, 1.0]),
            np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]]),
            np.array([-1.0, -1.0, -1.0]),
        )
        assert status == "optimal" and value == pytest.approx(-1.0)

    def test_unbounded(self):
        sol = solve(lp([-1.0], [[1.0]], [0.0]))
        assert sol.status is LpStatus.UNBOUNDED

    def test_infeasible(self):
        # x >= 1 and -x >= 1 cannot hold together
        sol = solve(lp([1.0], [[1.0], [-1.0]], [1.0, 1.0]))
        assert sol.status is LpStatus.INFEASIBLE

    def test_free_variable_negative_optimum(self):
        sol = solve(lp([1.0], [[1.0]], [-5.0]))
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x == pytest.approx([-5.0], abs=1e-9)

    def test_zero_variables_feasible(self):
        sol = solve(LinearProgram(np.zeros(0), np.zeros((2, 0)), np.array([-1.0, 0.0])))
        assert sol.status is LpStatus.OPTIMAL
        assert sol.objective_value == 0.0

    def test_zero_variables_infeasible(self):
        sol = solve(LinearProgram(np.zeros(0), np.zeros((1, 0)), np.array([1.0])))
        assert sol.status is LpStatus.INFEASIBLE

    def test_zero_constraints_zero_objective(self):
        sol = solve(LinearProgram(np.zeros(2), np.zeros((0, 2)), np.zeros(0)))
        assert sol.status is LpStatus.OPTIMAL
        assert sol.x == pytest.approx([0.0, 0.0])

    def test_zero_constraints_nonzero_objective(self):
        sol = solve(LinearProgram(np.array([1.0]), np.zeros((0, 1)), np.zeros(0)))
        assert sol.status is LpStatus.UNBOUNDED

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            LinearProgram(np.ones(2), np.ones((2, 3)), np.ones(2))
        with pytest.raises(ValueError):
            LinearProgram(np.ones(2), np.ones((2, 2)), np.ones(3))


class TestAgainstEnumeration:
    def test_random_integer_lps(self, rng):
        compared = 0
        for _ in range(300):
            n = int(rng.integers(1, 7))
            m = int(rng.integers(1, 9))
            G = rng.integers(-3, 4, size=(m, n)).astype(float)
            h = rng.integers(-3, 4, size=m).astype(float)
            c = rng.integers(-3, 4, size=n).astype(float)
            status, value = minimize_by_enumeration(c, G, h)
            sol = solve(LinearProgram(c, G, h))
            if status == "abstain":
                continue
            compared += 1
            if status == "optimal":
                assert sol.status is LpStatus.OPTIMAL
                assert sol.objective_value == pytest.approx(value, abs=1e-6)
                assert np.all(G @ sol.x >= h - 1e-7)
            elif status == "unbounded":
                assert sol.status is LpStatus.UNBOUNDED
            else:
                assert sol.status is LpStatus.INFEASIBLE
        assert compared > 150  # the oracle must not abstain on most draws

    def test_optimal_solutions_feasible(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 5))
            m = int(rng.integers(1, 7))
            G = rng.normal(size=(m, n))
            h = rng.normal(size=m)
            c = rng.normal(size=n)
            sol = solve(LinearProgram(c, G, h))
            if sol.status is LpStatus.OPTIMAL:
                assert np.all(G @ sol.x >= h - 1e-7)
                assert sol.objective_value == pytest.approx(float(c @ sol.x))
