import os

import numpy as np
import pytest

from epicontrol.cli import main
from epicontrol.errors import ConfigError
from epicontrol.harness import (
    ExperimentConfig,
    parse_config,
    run_experiment,
    run_sweep,
)

TOY_GRAPH = "a b\nb c\na c\nc d\n"

FIG1_KEYS = """
graph = {graph}
beta = 6
gamma = 5
delta = 1
rho = 5
eta = 1
q_lambda = 1
q_x = 400
"""


@pytest.fixture
def toy_graph_path(tmp_path):
    path = tmp_path / "toy.edgelist"
    path.write_text(TOY_GRAPH)
    return str(path)


def toy_config(graph_path, out_dir, **kw):
    defaults = dict(
        graph_path=graph_path,
        beta=6.0, gamma=5.0, delta=1.0, rho=5.0, eta=1.0,
        q_lambda=1.0, q_x=50.0,
        t_final=1.0,
        runs_per_policy=2,
        base_seed=7,
        initial_infected_count=2,
        output_dir=out_dir,
        allow_unmatched=True,
    )
    defaults.update(kw)
    return ExperimentConfig(**defaults)


class TestParseConfig:
    def test_full_fig1_set(self, toy_graph_path):
        cfg = parse_config(FIG1_KEYS.format(graph=toy_graph_path))
        assert cfg.beta == 6.0 and cfg.q_x == 400.0
        assert cfg.t_final == 10.0  # default
        assert cfg.runs_per_policy == 50
        assert len(cfg.policies) == 8

    def test_gamma_exceeding_beta_rejected(self, toy_graph_path):
        text = FIG1_KEYS.format(graph=toy_graph_path).replace(
            "gamma = 5", "gamma = 7"
        )
        with pytest.raises(ConfigError, match="gamma"):
            parse_config(text)

    def test_eta_zero_rejected(self, toy_graph_path):
        text = FIG1_KEYS.format(graph=toy_graph_path).replace(
            "eta = 1", "eta = 0"
        )
        with pytest.raises(ConfigError, match="eta"):
            parse_config(text)

    def test_unknown_key_rejected(self, toy_graph_path):
        with pytest.raises(ConfigError, match="exposure"):
            parse_config(
                FIG1_KEYS.format(graph=toy_graph_path) + "exposure = 3\n"
            )

    def test_missing_key_named(self):
        with pytest.raises(ConfigError, match="rho"):
            parse_config("graph = g\nbeta = 6\ngamma = 5\ndelta = 1\n"
                         "eta = 1\nq_lambda = 1\nq_x = 400\n")

    def test_type_error_named(self, toy_graph_path):
        text = FIG1_KEYS.format(graph=toy_graph_path).replace(
            "beta = 6", "beta = six"
        )
        with pytest.raises(ConfigError, match="beta"):
            parse_config(text)

    def test_lists(self, toy_graph_path):
        text = FIG1_KEYS.format(graph=toy_graph_path) + (
            "policies = SOC,T\nq_x_sweep = 1, 10, 100\n"
        )
        cfg = parse_config(text)
        assert cfg.policies == ("SOC", "T")
        assert cfg.q_x_sweep == (1.0, 10.0, 100.0)


class TestRunExperiment:
    def test_smoke_two_runs_all_policies(self, toy_graph_path, tmp_path):
        out = str(tmp_path / "out")
        result = run_experiment(toy_config(toy_graph_path, out))
        summary = (tmp_path / "out" / "summary.csv").read_text().splitlines()
        assert summary[0] == (
            "policy,run_id,seed,coverage,peak_infected,total_treatments,"
            "discounted_cost"
        )
        assert len(summary) == 1 + 8 * 2  # header + 2 rows per policy
        assert (tmp_path / "out" / "timeseries.csv").exists()
        assert (tmp_path / "out" / "calibration.csv").exists()
        assert (tmp_path / "out" / "graph.edgelist").exists()
        assert (tmp_path / "out" / "events" / "SOC" / "0.csv").exists()
        assert result.target_treatments >= 0

    def test_determinism_byte_identical(self, toy_graph_path, tmp_path):
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        run_experiment(toy_config(toy_graph_path, out1))
        run_experiment(toy_config(toy_graph_path, out2))
        for name in ("summary.csv", "timeseries.csv", "calibration.csv"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b, name

    def test_determinism_across_parallelism(self, toy_graph_path, tmp_path):
        out1, out2 = str(tmp_path / "j1"), str(tmp_path / "j2")
        run_experiment(toy_config(toy_graph_path, out1, jobs=1))
        run_experiment(toy_config(toy_graph_path, out2, jobs=2))
        a = (tmp_path / "j1" / "summary.csv").read_bytes()
        b = (tmp_path / "j2" / "summary.csv").read_bytes()
        assert a == b

    def test_initial_conditions_shared_across_policies(
        self, toy_graph_path, tmp_path
    ):
        out = str(tmp_path / "out")
        run_experiment(toy_config(toy_graph_path, out, policies=("SOC", "T")))
        # run 0's seed rows (t = 0) must list the same nodes for both policies
        def seed_nodes(policy):
            lines = (
                tmp_path / "out" / "events" / policy / "0.csv"
            ).read_text().splitlines()[1:]
            return sorted(
                int(l.split(",")[2]) for l in lines if l.split(",")[1] == "0"
            )

        assert seed_nodes("SOC") == seed_nodes("T")

    def test_event_log_schema(self, toy_graph_path, tmp_path):
        out = str(tmp_path / "out")
        run_experiment(toy_config(toy_graph_path, out, policies=("SOC", "T")))
        lines = (
            tmp_path / "out" / "events" / "SOC" / "1.csv"
        ).read_text().splitlines()
        assert lines[0] == "run_id,t,node,kind"
        kinds = {line.split(",")[3] for line in lines[1:]}
        assert kinds <= {"I", "R", "T"}


class TestSweep:
    def test_sweep_writes_one_block_per_value(self, toy_graph_path, tmp_path):
        out = str(tmp_path / "sweep")
        cfg = toy_config(
            toy_graph_path, out,
            policies=("SOC", "T"),
            q_x_sweep=(10.0, 50.0),
        )
        rows = run_sweep(cfg)
        assert {r[0] for r in rows} == {10.0, 50.0}
        sweep_lines = (tmp_path / "sweep" / "sweep.csv").read_text().splitlines()
        assert sweep_lines[0] == "q_x,policy,coverage_mean,coverage_sem"
        assert len(sweep_lines) == 1 + 2 * 2
        assert (tmp_path / "sweep" / "qx_10" / "summary.csv").exists()


class TestCli:
    def config_file(self, tmp_path, graph_path, extra=""):
        path = tmp_path / "exp.cfg"
        path.write_text(
            FIG1_KEYS.format(graph=graph_path)
            + "t_final = 0.5\nruns_per_policy = 2\ninitial_infected_count = 2\n"
            + "q_x = 50\n".replace("q_x = 400", "")
            + extra
        )
        return str(path)

    def test_bad_config_exit_code(self, tmp_path, toy_graph_path, capsys):
        path = tmp_path / "bad.cfg"
        path.write_text("beta = 6\n")
        assert main(["compare", "--config", str(path)]) == 2

    def test_compare_cli(self, tmp_path, toy_graph_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            FIG1_KEYS.format(graph=toy_graph_path)
            + "t_final = 0.5\nruns_per_policy = 2\ninitial_infected_count = 2\n"
            + "policies = SOC,T\n"
        )
        out = str(tmp_path / "cliout")
        code = main([
            "compare", "--config", str(cfg), "--out", out, "--allow-unmatched",
        ])
        assert code == 0
        assert os.path.exists(os.path.join(out, "summary.csv"))

    def test_lp_check(self, tmp_path, capsys):
        lp_file = tmp_path / "prob.lp"
        lp_file.write_text("1\n1 3\n")  # min x s.t. x >= 3
        assert main(["lp-check", str(lp_file)]) == 0
        out = capsys.readouterr().out
        assert "Optimal" in out and "3" in out

    def test_policy_debug(self, tmp_path, capsys):
        graph = tmp_path / "g.edgelist"
        graph.write_text("a b\n")
        code = main([
            "policy-debug", "--graph", str(graph), "--infected", "a",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "lambda*" in out and "HJB residual" in out
