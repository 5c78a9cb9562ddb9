"""Undirected graphs in CSR form, adjacency normalization, and synthetic graphs.

Graphs are unweighted, symmetric, and never store self-loops; self-loops enter
only through the +I term of the normalized adjacency. All index arrays are
int64 and all values float64. Instances are frozen after construction and safe
to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import csr_dense_matmul
from .errors import ParseError


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Graph:
    """Undirected graph stored as sorted CSR neighbor lists."""

    num_nodes: int
    row_offsets: np.ndarray
    col_indices: np.ndarray

    @property
    def num_edges(self) -> int:
        return self.col_indices.shape[0] // 2

    def degrees(self) -> np.ndarray:
        return np.diff(self.row_offsets)

    def degree(self, u: int) -> int:
        self._check_node(u)
        return int(self.row_offsets[u + 1] - self.row_offsets[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted open neighborhood of u."""
        self._check_node(u)
        return self.col_indices[self.row_offsets[u] : self.row_offsets[u + 1]]

    def closed_neighborhood(self, u: int) -> np.ndarray:
        """Sorted neighborhood of u including u itself."""
        nbrs = self.neighbors(u)
        pos = int(np.searchsorted(nbrs, u))
        return np.insert(nbrs, pos, u)

    def _check_node(self, u: int) -> None:
        if not 0 <= u < self.num_nodes:
            raise ValueError(f"node id {u} out of range [0, {self.num_nodes})")


def build_graph(num_nodes: int, edges) -> Graph:
    """Build a Graph from (u, v) pairs.

    Input pairs may arrive in either orientation, with duplicates and
    self-loops; the result is symmetric, deduplicated, and self-loop free.
    """
    if num_nodes < 0:
        raise ValueError("num_nodes must be non-negative")
    pairs = np.asarray(edges, dtype=np.int64)
    if pairs.size == 0:
        pairs = pairs.reshape(0, 2)
    if pairs.ndim != 2 or pairs.shape[1] != 2:
        raise ValueError("edges must be a sequence of (u, v) pairs")
    if pairs.size and (pairs.min() < 0 or pairs.max() >= num_nodes):
        bad = pairs[((pairs < 0) | (pairs >= num_nodes)).any(axis=1)][0]
        raise ValueError(
            f"edge ({bad[0]}, {bad[1]}) has an endpoint outside [0, {num_nodes})"
        )

    pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    both = np.concatenate([pairs, pairs[:, ::-1]], axis=0)
    if both.shape[0]:
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        keep = np.ones(both.shape[0], dtype=bool)
        keep[1:] = np.any(both[1:] != both[:-1], axis=1)
        both = both[keep]

    counts = np.bincount(both[:, 0], minlength=num_nodes)
    row_offsets = np.zeros(num_nodes + 1, dtype=np.int64)
    np.cumsum(counts, out=row_offsets[1:])
    col_indices = np.ascontiguousarray(both[:, 1])
    return Graph(num_nodes, _readonly(row_offsets), _readonly(col_indices))


@dataclass(frozen=True)
class SparseMatrix:
    """Square CSR matrix with float64 values."""

    num_rows: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def matmul(self, dense: np.ndarray) -> np.ndarray:
        """Return self @ dense as a dense (num_rows, k) array."""
        dense = np.ascontiguousarray(dense, dtype=np.float64)
        return csr_dense_matmul(self.row_offsets, self.col_indices, self.values, dense)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.num_rows, self.num_rows))
        for u in range(self.num_rows):
            lo, hi = self.row_offsets[u], self.row_offsets[u + 1]
            out[u, self.col_indices[lo:hi]] = self.values[lo:hi]
        return out


def normalized_adjacency(g: Graph) -> SparseMatrix:
    """Symmetrically normalized adjacency with self-loops.

    Entry (u, v) is 1/sqrt((deg_u + 1) * (deg_v + 1)) for v in the closed
    neighborhood of u; isolated nodes get a diagonal 1.
    """
    n = g.num_nodes
    inv_sqrt = 1.0 / np.sqrt(g.degrees() + 1.0)
    rows = np.concatenate([np.repeat(np.arange(n, dtype=np.int64), g.degrees()),
                           np.arange(n, dtype=np.int64)])
    cols = np.concatenate([g.col_indices, np.arange(n, dtype=np.int64)])
    order = np.lexsort((cols, rows))
    rows, cols = rows[order], cols[order]
    values = inv_sqrt[rows] * inv_sqrt[cols]

    counts = np.bincount(rows, minlength=n)
    row_offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=row_offsets[1:])
    return SparseMatrix(
        n,
        _readonly(row_offsets),
        _readonly(np.ascontiguousarray(cols)),
        _readonly(np.ascontiguousarray(values)),
    )


def sbm_generate(num_nodes: int, num_classes: int, p_in: float, p_out: float,
                 feature_dim: int, feature_noise: float, seed: int):
    """Sample a stochastic-block-model graph with noisy one-hot features.

    Nodes are partitioned evenly into classes (remainder to the last class).
    Each within-class pair is joined with probability p_in and each
    cross-class pair with p_out. Features are the unit-norm one-hot class
    centroid plus Gaussian noise with standard deviation feature_noise.
    Deterministic for a fixed seed: edges are drawn first, then features.

    Returns (graph, labels, features).
    """
    if not 0.0 <= p_in <= 1.0 or not 0.0 <= p_out <= 1.0:
        raise ValueError("edge probabilities must lie in [0, 1]")
    if p_in <= p_out:
        raise ValueError("p_in must exceed p_out")
    if num_classes < 1 or num_nodes < num_classes:
        raise ValueError("need at least one node per class")
    if feature_dim < num_classes:
        raise ValueError("feature_dim must be at least num_classes")
    if feature_noise < 0.0:
        raise ValueError("feature_noise must be non-negative")

    sizes = np.full(num_classes, num_nodes // num_classes, dtype=np.int64)
    sizes[-1] += num_nodes % num_classes
    labels = np.repeat(np.arange(num_classes, dtype=np.int64), sizes)

    rng = np.random.default_rng(seed)
    iu, iv = np.triu_indices(num_nodes, k=1)
    p_edge = np.where(labels[iu] == labels[iv], p_in, p_out)
    mask = rng.random(iu.shape[0]) < p_edge
    graph = build_graph(num_nodes, np.column_stack([iu[mask], iv[mask]]))

    centroids = np.zeros((num_classes, feature_dim))
    centroids[np.arange(num_classes), np.arange(num_classes)] = 1.0
    features = centroids[labels]
    if feature_noise > 0.0:
        features = features + feature_noise * rng.standard_normal((num_nodes, feature_dim))
    return graph, _readonly(labels), _readonly(np.ascontiguousarray(features))


def read_edge_list(path, num_nodes: int | None = None) -> list[tuple[int, int]]:
    """Read a text edge list: one `u v` pair per line, `#` lines ignored.

    When num_nodes is given, endpoints are range-checked with line numbers.
    """
    edges: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ParseError(path, lineno, "expected two whitespace-separated node ids")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(path, lineno, f"non-integer node id in {parts!r}") from None
            if num_nodes is not None and not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ParseError(path, lineno, f"edge ({u}, {v}) outside [0, {num_nodes})")
            edges.append((u, v))
    return edges
