"""Random graph sampling from vertex weights.

The main edge law connects vertices ``i`` and ``j`` independently with
probability ``w_i * w_j / (total + w_i * w_j)``; the Chung-Lu variant uses
``w_i * w_j / total`` and requires ``w_i**2 <= total`` for every vertex.
Graphs are stored as CSR adjacency (strictly sorted neighbor lists, no
self-loops) so the cycle census kernels can run directly on the arrays.

Sampling consumes exactly one uniform variate per vertex pair, visiting
pairs in lexicographic order, so a fixed seed pins the whole bit stream.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .weights import WeightVector

__all__ = [
    "GrgGraph",
    "edge_probability",
    "sample_grg",
    "sample_chung_lu",
    "cycle_probability",
]


@dataclass(frozen=True)
class GrgGraph:
    """Simple undirected graph over vertices ``0..n-1`` in CSR form."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    weights: Optional[WeightVector] = None

    @property
    def m(self) -> int:
        """Number of undirected edges."""
        return int(self.indices.size // 2)

    def degree(self, i: int) -> int:
        return int(self.indptr[i + 1] - self.indptr[i])

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        row = self.neighbors(i)
        pos = int(np.searchsorted(row, j))
        return pos < row.size and int(row[pos]) == j

    def edge_array(self) -> np.ndarray:
        """Edges as an (m, 2) array with u < v, lexicographically sorted."""
        us = np.repeat(np.arange(self.n), np.diff(self.indptr))
        mask = us < self.indices
        return np.column_stack([us[mask], self.indices[mask]])

    # -- construction & text interop ---------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]],
                   weights: Optional[WeightVector] = None) -> "GrgGraph":
        pairs = set()
        for u, v in edges:
            u = int(u)
            v = int(v)
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) outside 0..{n - 1}")
            pairs.add((min(u, v), max(u, v)))
        deg = np.zeros(n, dtype=np.int64)
        for u, v in pairs:
            deg[u] += 1
            deg[v] += 1
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=indptr[1:])
        indices = np.empty(int(indptr[-1]), dtype=np.int64)
        fill = indptr[:-1].copy()
        for u, v in pairs:
            indices[fill[u]] = v
            fill[u] += 1
            indices[fill[v]] = u
            fill[v] += 1
        for i in range(n):
            indices[indptr[i]:indptr[i + 1]].sort()
        return cls(n=n, indptr=indptr, indices=indices, weights=weights)

    @classmethod
    def complete(cls, n: int) -> "GrgGraph":
        from itertools import combinations
        return cls.from_edges(n, combinations(range(n), 2))

    def to_edge_text(self) -> str:
        """Whitespace edge list with an ``n m`` header, 1-based vertex ids."""
        lines = [f"{self.n} {self.m}"]
        for u, v in self.edge_array():
            lines.append(f"{u + 1} {v + 1}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_text(cls, text: str) -> "GrgGraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not rows or len(rows[0]) != 2:
            raise ValueError("edge list must start with an 'n m' header")
        n, m = (int(x) for x in rows[0])
        edges = []
        for ln in rows[1:]:
            if len(ln) != 2:
                raise ValueError(f"malformed edge line: {' '.join(ln)}")
            u, v = (int(x) for x in ln)
            if not (1 <= u <= n and 1 <= v <= n):
                raise ValueError(f"edge ({u},{v}) outside 1..{n}")
            edges.append((u - 1, v - 1))
        if len(edges) != m:
            raise ValueError(f"header declares {m} edges, found {len(edges)}")
        return cls.from_edges(n, edges)


def edge_probability(w_i: float, w_j: float, total: float) -> float:
    """Connection probability of one vertex pair given the total weight."""
    if w_i <= 0 or w_j <= 0:
        raise ValueError("weights must be strictly positive")
    if total < w_i + w_j:
        raise ValueError("total weight is smaller than the pair's weights")
    prod = w_i * w_j
    return prod / (total + prod)


def _csr_from_rows(n: int, row_targets: list) -> tuple:
    deg = np.zeros(n, dtype=np.int64)
    for i, js in enumerate(row_targets):
        deg[i] += js.size
        deg[js] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    indices = np.empty(int(indptr[-1]), dtype=np.int64)
    fill = indptr[:-1].copy()
    for i, js in enumerate(row_targets):
        for j in js:
            indices[fill[i]] = j
            fill[i] += 1
            indices[fill[j]] = i
            fill[j] += 1
    # rows built in ascending order on both sides, so they are already sorted
    return indptr, indices


def _sample_pairwise(weights: WeightVector, seed, chung_lu: bool) -> GrgGraph:
    w = weights.values
    n = w.size
    if n < 2:
        raise ValueError("need at least two vertices")
    total = weights.total
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n - 1):
        u = rng.random(n - 1 - i)
        prod = w[i] * w[i + 1:]
        p = prod / total if chung_lu else prod / (total + prod)
        rows.append(np.nonzero(u < p)[0].astype(np.int64) + i + 1)
    rows.append(np.empty(0, dtype=np.int64))
    indptr, indices = _csr_from_rows(n, rows)
    return GrgGraph(n=n, indptr=indptr, indices=indices, weights=weights)


def sample_grg(weights: WeightVector, seed) -> GrgGraph:
    """Sample the weighted graph under the main edge law."""
    return _sample_pairwise(weights, seed, chung_lu=False)


def sample_chung_lu(weights: WeightVector, seed) -> GrgGraph:
    """Sample the Chung-Lu variant (edge probability ``w_i w_j / total``)."""
    w = weights.values
    bad = np.nonzero(w * w > weights.total)[0]
    if bad.size:
        i = int(bad[0])
        raise ValueError(
            f"Chung-Lu requires W_i^2 <= total weight; vertex {i + 1} "
            f"(1-based) has W^2 = {w[i] * w[i]:g} > {weights.total:g}")
    return _sample_pairwise(weights, seed, chung_lu=True)


def cycle_probability(weights: WeightVector, cycle: Sequence[int]) -> float:
    """Probability that a given vertex cycle occurs, given the weights.

    Edges are conditionally independent, so this is the product of the edge
    probabilities along the cycle.
    """
    verts = [int(v) for v in cycle]
    if len(verts) < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    if len(set(verts)) != len(verts):
        raise ValueError("cycle contains a repeated vertex")
    w = weights.values
    if any(not 0 <= v < w.size for v in verts):
        raise ValueError("cycle vertex outside the weight vector")
    total = weights.total
    prob = 1.0
    for a, b in zip(verts, verts[1:] + verts[:1]):
        prob *= edge_probability(w[a], w[b], total)
    return prob
