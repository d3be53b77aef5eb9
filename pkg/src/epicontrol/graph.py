"""Undirected contact network: loading, validation, and spectral queries."""

import numpy as np

from .errors import GraphParseError, GraphValidationError, NumericalError

POWER_ITERATION_CAP = 10_000


class Network:
    """Immutable undirected, unweighted contact network.

    Parameters
    ----------
    node_count : int
        Number of nodes; indices run from 0 to node_count - 1.
    edges : iterable of (int, int)
        Undirected edges as index pairs. Duplicates (in either order)
        collapse to a single edge.
    node_labels : list of str, optional
        Display labels aligned with node indices.
    """

    def __init__(self, node_count, edges, node_labels=None):
        if node_count <= 0:
            raise GraphValidationError("network must have at least one node")
        if node_labels is not None and len(node_labels) != node_count:
            raise GraphValidationError("node_labels length must equal node_count")

        dedup = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < node_count and 0 <= v < node_count):
                raise GraphValidationError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise GraphValidationError(f"self-loop at node {u}")
            dedup.add((min(u, v), max(u, v)))

        self.node_count = node_count
        self.node_labels = list(node_labels) if node_labels is not None else None
        self.edges = frozenset(dedup)

        A = np.zeros((node_count, node_count), dtype=np.int64)
        for u, v in dedup:
            A[u, v] = 1
            A[v, u] = 1
        A.setflags(write=False)
        self.adjacency = A

        self._degrees = A.sum(axis=1)
        self._degrees.setflags(write=False)
        self._neighbors = [np.flatnonzero(A[i]) for i in range(node_count)]

    @property
    def edge_count(self):
        return len(self.edges)

    @property
    def degrees(self):
        return self._degrees

    def neighbors(self, i):
        return self._neighbors[i]

    def index_of(self, label):
        """Map a display label back to its node index."""
        if self.node_labels is None:
            raise KeyError("network has no labels")
        return self.node_labels.index(label)

    def __repr__(self):
        return f"Network(nodes={self.node_count}, edges={self.edge_count})"


def load_edge_list(text):
    """Parse an edge-list text into a Network.

    Each non-empty, non-comment line names two distinct endpoints separated
    by whitespace; `#` starts a comment. Labels are mapped to dense 0-based
    indices in order of first appearance.
    """
    labels = []
    index = {}
    edges = []
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphParseError(
                f"expected two endpoints, got {len(parts)}: {line!r}", line_no
            )
        a, b = parts
        if a == b:
            raise GraphValidationError(f"line {line_no}: self-loop on {a!r}")
        for lab in (a, b):
            if lab not in index:
                index[lab] = len(labels)
                labels.append(lab)
        edges.append((index[a], index[b]))
    if not edges:
        raise GraphValidationError("edge list is empty")
    return Network(len(labels), edges, node_labels=labels)


def load_edge_list_file(path):
    with open(path, "r", encoding="utf-8") as fh:
        return load_edge_list(fh.read())


def degree(net, i):
    """Number of neighbors of node i."""
    if not 0 <= i < net.node_count:
        raise IndexError(f"node index {i} out of range")
    return int(net.degrees[i])


def _power_radius(A, tol, cap=POWER_ITERATION_CAP):
    """Dominant eigenvalue of a nonnegative symmetric matrix.

    Power iteration on A + I with a deterministic all-ones start vector,
    stopping on successive Rayleigh quotients. The unit shift breaks the
    +/- eigenvalue symmetry of bipartite graphs, for which plain power
    iteration does not converge to the radius.
    """
    n = A.shape[0]
    v = np.ones(n) / np.sqrt(n)
    shifted_rq = None
    for _ in range(cap):
        w = A @ v + v
        norm = np.linalg.norm(w)
        if norm == 0.0:  # unreachable with the shift, kept as a guard
            return 0.0
        v = w / norm
        rq = v @ (A @ v) + 1.0
        if shifted_rq is not None and abs(rq - shifted_rq) <= tol:
            return max(rq - 1.0, 0.0)
        shifted_rq = rq
    raise NumericalError(
        f"power iteration did not converge within {cap} iterations (tol={tol})"
    )


def spectral_radius(net, tol=1e-10):
    """Largest eigenvalue magnitude of the adjacency matrix."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    return _power_radius(net.adjacency.astype(float), tol)


def spectral_drop_scores(net, tol=1e-10):
    """Per-node decrease in spectral radius when the node is removed.

    Removal zeroes the node's row and column, keeping indices stable.
    Small negative differences (numerical noise) are clamped to zero.
    """
    A = net.adjacency.astype(float)
    base = _power_radius(A, tol)
    scores = np.zeros(net.node_count)
    for i in range(net.node_count):
        B = A.copy()
        B[i, :] = 0.0
        B[:, i] = 0.0
        scores[i] = max(base - _power_radius(B, tol), 0.0)
    return scores
