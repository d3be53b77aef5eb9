import importlib.resources

import numpy as np
import pytest

from epicontrol.errors import GraphParseError, GraphValidationError
from epicontrol.graph import (
    Network,
    degree,
    load_edge_list,
    spectral_drop_scores,
    spectral_radius,
)

from conftest import random_network


def dense_radius(A):
    """Oracle: dominant eigenvalue via full symmetric eigendecomposition."""
    return float(np.max(np.abs(np.linalg.eigvalsh(np.asarray(A, dtype=float)))))


class TestLoadEdgeList:
    def test_two_edge_path(self):
        net = load_edge_list("a b\nb c")
        assert net.node_count == 3
        assert net.edge_count == 2
        assert net.node_labels == ["a", "b", "c"]
        assert degree(net, net.index_of("b")) == 2

    def test_duplicates_collapse(self):
        net = load_edge_list("a b\nb a\na b")
        assert net.node_count == 2
        assert net.edge_count == 1

    def test_comments_and_blank_lines(self):
        net = load_edge_list("# header\n\na b  # trailing\nb c\n")
        assert net.node_count == 3
        assert net.edge_count == 2

    def test_malformed_line_reports_number(self):
        with pytest.raises(GraphParseError, match="line 2"):
            load_edge_list("a b\na b c")

    def test_self_loop_rejected(self):
        with pytest.raises(GraphValidationError):
            load_edge_list("a a")

    def test_empty_rejected(self):
        with pytest.raises(GraphValidationError):
            load_edge_list("# nothing here\n")

    def test_us_states_file(self):
        text = (
            importlib.resources.files("epicontrol")
            .joinpath("data/us_contiguous.edgelist")
            .read_text()
        )
        net = load_edge_list(text)
        assert net.node_count == 49
        assert net.edge_count == 107


class TestNetworkInvariants:
    def test_adjacency_symmetric_zero_diagonal(self, rng):
        for _ in range(20):
            net = random_network(rng)
            A = net.adjacency
            assert np.array_equal(A, A.T)
            assert np.all(np.diag(A) == 0)
            assert A.sum() == 2 * net.edge_count

    def test_out_of_range_edge(self):
        with pytest.raises(GraphValidationError):
            Network(2, [(0, 2)])


class TestDegree:
    def test_path_middle(self, path3):
        assert degree(path3, 1) == 2

    def test_path_end(self, path3):
        assert degree(path3, 0) == 1

    def test_star_center(self, star4):
        assert degree(star4, 0) == 3

    def test_out_of_range(self, path3):
        with pytest.raises(IndexError):
            degree(path3, 3)


class TestSpectralRadius:
    def test_single_edge(self):
        net = Network(2, [(0, 1)])
        assert spectral_radius(net) == pytest.approx(1.0, abs=1e-9)

    def test_triangle(self, triangle):
        assert spectral_radius(triangle) == pytest.approx(2.0, abs=1e-9)

    def test_star(self, star4):
        # sqrt(3), frozen from dense eigendecomposition of the 4x4 matrix
        assert spectral_radius(star4) == pytest.approx(1.7320508075688772, abs=1e-8)

    def test_matches_dense_oracle(self, rng):
        for _ in range(25):
            net = random_network(rng)
            assert spectral_radius(net) == pytest.approx(
                dense_radius(net.adjacency), abs=1e-7
            )

    def test_degree_bounds(self, rng):
        for _ in range(25):
            net = random_network(rng)
            r = spectral_radius(net)
            degs = net.degrees
            assert r <= degs.max() + 1e-7
            assert r >= degs.mean() - 1e-7


class TestSpectralDropScores:
    def test_star(self, star4):
        scores = spectral_drop_scores(star4)
        # frozen: sqrt(3) and sqrt(3) - sqrt(2), from dense eigendecomposition
        # of each node-removed matrix
        assert scores[0] == pytest.approx(1.7320508075688772, abs=1e-7)
        assert scores[1:] == pytest.approx(0.3178372451957823, abs=1e-7)

    def test_single_edge(self):
        net = Network(2, [(0, 1)])
        assert spectral_drop_scores(net) == pytest.approx([1.0, 1.0], abs=1e-8)

    def test_triangle(self, triangle):
        assert spectral_drop_scores(triangle) == pytest.approx(
            [1.0, 1.0, 1.0], abs=1e-8
        )

    def test_matches_dense_oracle(self, rng):
        for _ in range(5):
            net = random_network(rng, n_max=15)
            scores = spectral_drop_scores(net)
            base = dense_radius(net.adjacency)
            for i in range(net.node_count):
                B = net.adjacency.astype(float).copy()
                B[i, :] = 0
                B[:, i] = 0
                assert scores[i] == pytest.approx(
                    max(base - dense_radius(B), 0.0), abs=1e-7
                )

    def test_permutation_equivariance(self, rng):
        net = random_network(rng, n_min=6, n_max=12)
        perm = rng.permutation(net.node_count)
        relabeled = Network(
            net.node_count, [(perm[u], perm[v]) for u, v in net.edges]
        )
        scores = spectral_drop_scores(net)
        relabeled_scores = spectral_drop_scores(relabeled)
        assert relabeled_scores[perm] == pytest.approx(scores, abs=1e-7)
