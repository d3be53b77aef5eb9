import numpy as np
import pytest

import epicontrol.dynamics as dyn
from epicontrol.dynamics import (
    ControlParams,
    Event,
    EventKind,
    ModelParams,
    apply_event,
    init_state,
    intensities,
)
from epicontrol.errors import (
    IllegalTransitionError,
    ParameterError,
    TimeOrderError,
)

from conftest import random_network

FIG1 = ModelParams(beta=6.0, gamma=5.0, delta=1.0, rho=5.0)


class TestParams:
    def test_gamma_exceeding_beta_rejected(self):
        with pytest.raises(ParameterError):
            ModelParams(beta=6.0, gamma=7.0, delta=1.0, rho=5.0)

    def test_negative_rate_rejected(self):
        with pytest.raises(ParameterError):
            ModelParams(beta=-1.0, gamma=0.0, delta=1.0, rho=0.0)

    def test_eta_zero_rejected(self):
        with pytest.raises(ParameterError):
            ControlParams(q_lambda=1.0, q_x=400.0, eta=0.0, n=3)

    def test_nonpositive_q_lambda_rejected(self):
        with pytest.raises(ParameterError):
            ControlParams(q_lambda=0.0, q_x=1.0, eta=1.0, n=3)

    def test_scalar_broadcast(self):
        cp = ControlParams(q_lambda=1.0, q_x=400.0, eta=1.0, n=4)
        assert cp.q_lambda.shape == (4,)
        assert np.all(cp.q_x == 400.0)


class TestInitState:
    def test_single_infection_on_path(self, path3):
        s = init_state(path3, {0})
        assert list(s.X) == [1, 0, 0]
        assert list(s.Z) == [0, 1, 0]
        assert s.t == 0.0
        assert s.H.sum() == s.M.sum() == 0
        assert s.Y.sum() == s.W.sum() == s.N.sum() == 0

    def test_two_infections_on_triangle(self, triangle):
        s = init_state(triangle, {0, 1})
        assert list(s.Z) == [1, 1, 2]

    def test_empty_set(self, path3):
        s = init_state(path3, set())
        assert s.X.sum() == 0 and s.Z.sum() == 0

    def test_out_of_range(self, path3):
        with pytest.raises(IndexError):
            init_state(path3, {5})


class TestApplyEvent:
    def test_infection_updates_neighbors(self, path3):
        s = init_state(path3, {0})
        apply_event(s, path3, Event(0.5, 1, EventKind.INFECTION))
        assert list(s.X) == [1, 1, 0]
        assert list(s.Z) == [1, 1, 1]
        assert s.Y[1] == 1
        assert s.t == 0.5

    def test_recovery_of_treated_node_clears_both(self, path3):
        s = init_state(path3, {1})
        apply_event(s, path3, Event(0.1, 1, EventKind.TREATMENT_START))
        assert s.H[1] == 1 and list(s.M) == [1, 0, 1]
        apply_event(s, path3, Event(0.2, 1, EventKind.RECOVERY))
        assert s.X[1] == 0 and s.H[1] == 0
        assert list(s.Z) == [0, 0, 0]
        assert list(s.M) == [0, 0, 0]
        assert s.W[1] == 1

    def test_double_treatment_rejected(self, path3):
        s = init_state(path3, {1})
        apply_event(s, path3, Event(0.1, 1, EventKind.TREATMENT_START))
        with pytest.raises(IllegalTransitionError, match="node 1"):
            apply_event(s, path3, Event(0.2, 1, EventKind.TREATMENT_START))

    def test_infection_of_infected_rejected(self, path3):
        s = init_state(path3, {0})
        with pytest.raises(IllegalTransitionError):
            apply_event(s, path3, Event(0.1, 0, EventKind.INFECTION))

    def test_recovery_of_healthy_rejected(self, path3):
        s = init_state(path3, {0})
        with pytest.raises(IllegalTransitionError):
            apply_event(s, path3, Event(0.1, 2, EventKind.RECOVERY))

    def test_treatment_of_healthy_rejected(self, path3):
        s = init_state(path3, {0})
        with pytest.raises(IllegalTransitionError):
            apply_event(s, path3, Event(0.1, 2, EventKind.TREATMENT_START))

    def test_time_order_enforced(self, path3):
        s = init_state(path3, {0})
        apply_event(s, path3, Event(1.0, 1, EventKind.INFECTION))
        with pytest.raises(TimeOrderError):
            apply_event(s, path3, Event(0.5, 2, EventKind.INFECTION))


class TestIntensities:
    def test_partially_treated_neighborhood(self):
        # susceptible node with 2 infected neighbors, 1 of them treated
        net = random_network(np.random.default_rng(0), n_min=3, n_max=3, p=1.0)
        s = init_state(net, {1, 2})
        apply_event(s, net, Event(0.1, 1, EventKind.TREATMENT_START))
        infection, recovery, treatment = intensities(
            s, net, FIG1, np.zeros(net.node_count)
        )
        assert infection[0] == pytest.approx(6.0 * 2 - 5.0 * 1)

    def test_treated_recovery_rate(self, path3):
        s = init_state(path3, {1})
        apply_event(s, path3, Event(0.1, 1, EventKind.TREATMENT_START))
        _, recovery, _ = intensities(s, path3, FIG1, np.zeros(3))
        assert recovery[1] == pytest.approx(6.0)  # delta + rho

    def test_healthy_node_never_treated(self, path3):
        s = init_state(path3, {0})
        _, _, treatment = intensities(s, path3, FIG1, np.full(3, 7.5))
        assert treatment[2] == 0.0
        assert treatment[0] == pytest.approx(7.5)

    def test_negative_treat_rate_rejected(self, path3):
        s = init_state(path3, {0})
        with pytest.raises(ParameterError):
            intensities(s, path3, FIG1, np.array([-1.0, 0, 0]))

    def test_all_nonnegative_random_states(self, rng):
        for _ in range(10):
            net = random_network(rng, n_max=20)
            s = random_legal_state(rng, net)
            inf, rec, treat = intensities(s, net, FIG1, rng.random(net.node_count))
            assert inf.min() >= 0 and rec.min() >= 0 and treat.min() >= 0


def legal_events(state, net):
    """All events whose apply_event preconditions hold in this state."""
    out = []
    for i in range(net.node_count):
        if state.X[i] == 0:
            out.append((i, EventKind.INFECTION))
        else:
            out.append((i, EventKind.RECOVERY))
            if state.H[i] == 0:
                out.append((i, EventKind.TREATMENT_START))
    return out


def random_legal_state(rng, net, n_events=30):
    state = init_state(net, set(rng.choice(net.node_count, size=1)))
    t = 0.0
    for _ in range(n_events):
        node, kind = legal_events(state, net)[
            rng.integers(len(legal_events(state, net)))
        ]
        t += float(rng.exponential(0.1))
        apply_event(state, net, Event(t, node, kind))
    return state


class TestStateConsistency:
    def test_random_event_stream(self, rng):
        """Incremental Z/M bookkeeping matches from-scratch recomputation."""
        dyn.DEBUG_RECOMPUTE, saved = True, dyn.DEBUG_RECOMPUTE
        try:
            for _ in range(20):
                net = random_network(rng, n_max=30)
                state = init_state(
                    net, set(rng.choice(net.node_count, size=2, replace=False))
                )
                t = 0.0
                for _ in range(500):
                    candidates = legal_events(state, net)
                    node, kind = candidates[rng.integers(len(candidates))]
                    t += float(rng.exponential(0.05))
                    apply_event(state, net, Event(t, node, kind))
                assert np.array_equal(state.Z, net.adjacency.T @ state.X)
                assert np.array_equal(state.M, net.adjacency.T @ state.H)
                assert np.all(state.H <= state.X)
                assert np.array_equal(state.X, state.X0 + state.Y - state.W)
        finally:
            dyn.DEBUG_RECOMPUTE = saved
