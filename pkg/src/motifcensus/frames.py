"""Spanning frames: exact totals, equiprobable sampling, containment counts.

A frame is a small spanning tree drawn around a vertex or an edge:

  fork     2-edge path on 3 vertices, centered on its middle vertex
  trident  3-star on 4 vertices, centered on its hub
  chain    3-edge path on 4 vertices, built around its middle edge

Totals follow from degrees alone, so each kind can be sampled with every
instance equally likely.  A chain drawn around edge (i, j) picks one extra
neighbor on each side; when both picks coincide the outcome is degenerate:
it still consumes one experiment but cannot detect any motif.

Sampling happens on the undirected view; directed graphs are classified
afterwards from their arcs.  Containment coefficients (how many frame
instances live inside one motif instance) are likewise computed on the
motif's undirected view.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from types import MappingProxyType

import numpy as np

from .canon import arrcode_table
from .graphs import Graph, pair_slots


class FrameKind(str, Enum):
    FORK = "fork"
    TRIDENT = "trident"
    CHAIN = "chain"

    @property
    def size(self) -> int:
        return 3 if self is FrameKind.FORK else 4


def kinds_for_size(size: int) -> tuple[FrameKind, ...]:
    """Frame kinds that span motifs of the given size, in experiment order."""
    if size == 3:
        return (FrameKind.FORK,)
    if size == 4:
        return (FrameKind.CHAIN, FrameKind.TRIDENT)
    raise ValueError(f"motif size must be 3 or 4, got {size}")


@dataclass(frozen=True)
class FrameTotals:
    """Exact instance counts; chains include degenerate closed ones."""

    n_fork: int
    n_trident: int
    n_chain: int

    def for_kind(self, kind: FrameKind) -> int:
        return {FrameKind.FORK: self.n_fork,
                FrameKind.TRIDENT: self.n_trident,
                FrameKind.CHAIN: self.n_chain}[kind]

    def to_dict(self) -> dict:
        return {"fork": self.n_fork, "trident": self.n_trident,
                "chain": self.n_chain}


def frame_totals(g: Graph) -> FrameTotals:
    """Closed-form totals from the degree sequence and edge list."""
    k = g.degrees
    fork = int((k * (k - 1) // 2).sum())
    trident = int((k * (k - 1) * (k - 2) // 6).sum())
    if g.n_edges:
        chain = int(((k[g.edge_u] - 1) * (k[g.edge_v] - 1)).sum())
    else:
        chain = 0
    return FrameTotals(fork, trident, chain)


@dataclass(frozen=True)
class FrameSample:
    """One sampled frame.  Vertex layout by kind:

    fork     (leaf, center, leaf)
    trident  (hub, leaf, leaf, leaf)
    chain    (end, middle, middle, end); degenerate when the ends coincide
    """

    kind: FrameKind
    vertices: tuple[int, ...]
    degenerate: bool = False

    def instance_key(self) -> tuple:
        """Order-free identity of the underlying frame instance."""
        v = self.vertices
        if self.kind is FrameKind.FORK:
            return (v[1], min(v[0], v[2]), max(v[0], v[2]))
        if self.kind is FrameKind.TRIDENT:
            return (v[0],) + tuple(sorted(v[1:]))
        a, i, j, b = v
        # a chain and its reversal are the same instance
        return (i, j, a, b) if i < j else (j, i, b, a)


@dataclass(frozen=True)
class FrameBatch:
    """Vectorized samples: one column per sample, layout as FrameSample."""

    kind: FrameKind
    vertices: np.ndarray
    degenerate: np.ndarray

    @property
    def size(self) -> int:
        return int(self.vertices.shape[1])


class _CumulativeWeights:
    """Integer cumulative weights for exact discrete sampling."""

    def __init__(self, weights: np.ndarray):
        self.cum = np.cumsum(weights.astype(np.int64))
        self.total = int(self.cum[-1]) if weights.size else 0
        if self.total < 0 or (weights < 0).any():
            raise ValueError("frame totals exceed the 64-bit range")

    def draw(self, rng: np.random.Generator, size: int) -> np.ndarray:
        # integer draws keep every unit of weight exactly equally likely
        r = rng.integers(0, self.total, size=size, dtype=np.int64)
        return np.searchsorted(self.cum, r, side="right")


class ForkSampler:
    kind = FrameKind.FORK

    def __init__(self, g: Graph):
        k = g.degrees
        self._pick = _CumulativeWeights(k * (k - 1) // 2)
        if self._pick.total == 0:
            raise ValueError("graph has no forks")
        self._g = g

    @property
    def total(self) -> int:
        return self._pick.total

    def sample_batch(self, rng: np.random.Generator, size: int) -> FrameBatch:
        g = self._g
        c = self._pick.draw(rng, size)
        k = g.degrees[c]
        u = rng.integers(0, k, dtype=np.int64)
        w = rng.integers(0, k - 1, dtype=np.int64)
        w += w >= u  # distinct second leaf, still uniform
        base = g.adj_offsets[c]
        verts = np.stack([g.adj_flat[base + u], c, g.adj_flat[base + w]])
        return FrameBatch(self.kind, verts, np.zeros(size, dtype=bool))

    def sample(self, rng: np.random.Generator) -> FrameSample:
        batch = self.sample_batch(rng, 1)
        a, c, b = (int(x) for x in batch.vertices[:, 0])
        return FrameSample(self.kind, (a, c, b))


class TridentSampler:
    kind = FrameKind.TRIDENT

    def __init__(self, g: Graph):
        k = g.degrees
        self._pick = _CumulativeWeights(k * (k - 1) * (k - 2) // 6)
        if self._pick.total == 0:
            raise ValueError("graph has no tridents")
        self._g = g

    @property
    def total(self) -> int:
        return self._pick.total

    def sample_batch(self, rng: np.random.Generator, size: int) -> FrameBatch:
        g = self._g
        c = self._pick.draw(rng, size)
        k = g.degrees[c]
        u1 = rng.integers(0, k, dtype=np.int64)
        u2 = rng.integers(0, k - 1, dtype=np.int64)
        u2 += u2 >= u1
        lo = np.minimum(u1, u2)
        hi = np.maximum(u1, u2)
        u3 = rng.integers(0, k - 2, dtype=np.int64)
        u3 += u3 >= lo
        u3 += u3 >= hi  # ordered skips keep the third leaf uniform
        base = g.adj_offsets[c]
        verts = np.stack([c, g.adj_flat[base + u1], g.adj_flat[base + u2],
                          g.adj_flat[base + u3]])
        return FrameBatch(self.kind, verts, np.zeros(size, dtype=bool))

    def sample(self, rng: np.random.Generator) -> FrameSample:
        batch = self.sample_batch(rng, 1)
        c, a, b, d = (int(x) for x in batch.vertices[:, 0])
        return FrameSample(self.kind, (c, a, b, d))


class ChainSampler:
    kind = FrameKind.CHAIN

    def __init__(self, g: Graph):
        ku = g.degrees[g.edge_u]
        kv = g.degrees[g.edge_v]
        self._pick = _CumulativeWeights((ku - 1) * (kv - 1))
        if self._pick.total == 0:
            raise ValueError("graph has no chains")
        self._g = g

    @property
    def total(self) -> int:
        return self._pick.total

    def sample_batch(self, rng: np.random.Generator, size: int) -> FrameBatch:
        g = self._g
        e = self._pick.draw(rng, size)
        u = g.edge_u[e]
        v = g.edge_v[e]
        ia = rng.integers(0, g.degrees[u] - 1, dtype=np.int64)
        ia += ia >= g.edge_pos_in_u[e]  # skip v in u's row
        ib = rng.integers(0, g.degrees[v] - 1, dtype=np.int64)
        ib += ib >= g.edge_pos_in_v[e]  # skip u in v's row
        a = g.adj_flat[g.adj_offsets[u] + ia]
        b = g.adj_flat[g.adj_offsets[v] + ib]
        verts = np.stack([a, u, v, b])
        return FrameBatch(self.kind, verts, a == b)

    def sample(self, rng: np.random.Generator) -> FrameSample:
        batch = self.sample_batch(rng, 1)
        a, u, v, b = (int(x) for x in batch.vertices[:, 0])
        return FrameSample(self.kind, (a, u, v, b), degenerate=a == b)


_SAMPLER_TYPES = {FrameKind.FORK: ForkSampler,
                  FrameKind.TRIDENT: TridentSampler,
                  FrameKind.CHAIN: ChainSampler}


def frame_sampler(g: Graph, kind: FrameKind):
    """Sampler for one frame kind, cached per graph."""
    kind = FrameKind(kind)
    if kind not in g._samplers:
        g._samplers[kind] = _SAMPLER_TYPES[kind](g)
    return g._samplers[kind]


def sample_fork(g: Graph, rng: np.random.Generator) -> FrameSample:
    """One fork, every instance with probability exactly 1/n_fork."""
    return frame_sampler(g, FrameKind.FORK).sample(rng)


def sample_trident(g: Graph, rng: np.random.Generator) -> FrameSample:
    """One trident, every instance with probability exactly 1/n_trident."""
    return frame_sampler(g, FrameKind.TRIDENT).sample(rng)


def sample_chain(g: Graph, rng: np.random.Generator) -> FrameSample:
    """One chain outcome, each of the n_chain outcomes equally likely."""
    return frame_sampler(g, FrameKind.CHAIN).sample(rng)


# -- containment coefficients ---------------------------------------------


def _undirected_view(code: int, size: int, directed: bool) -> list[set]:
    adj: list[set] = [set() for _ in range(size)]
    for s, (i, j) in enumerate(pair_slots(size, directed)):
        if code >> s & 1:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def _count_forks(adj: list[set]) -> int:
    return sum(len(adj[c]) * (len(adj[c]) - 1) // 2 for c in range(len(adj)))


def _count_tridents(adj: list[set]) -> int:
    total = 0
    for c in range(len(adj)):
        d = len(adj[c])
        total += d * (d - 1) * (d - 2) // 6
    return total


def _count_chains(adj: list[set]) -> int:
    # 3-edge paths on 4 distinct vertices, each counted once per middle edge
    total = 0
    for i in range(len(adj)):
        for j in adj[i]:
            if j <= i:
                continue
            for a in adj[i] - {j}:
                for b in adj[j] - {i}:
                    if a != b:
                        total += 1
    return total


_FRAME_COUNTERS = {FrameKind.FORK: _count_forks,
                   FrameKind.TRIDENT: _count_tridents,
                   FrameKind.CHAIN: _count_chains}


@dataclass(frozen=True)
class KoefTable:
    """Frame instances contained in one motif instance, per class."""

    size: int
    directed: bool
    counts: MappingProxyType = field(repr=False)

    @property
    def kinds(self) -> tuple[FrameKind, ...]:
        return kinds_for_size(self.size)

    def koef(self, class_id: int, kind: FrameKind) -> int:
        kind = FrameKind(kind)
        if kind.size != self.size:
            raise ValueError(f"{kind.value} frames span size {kind.size}, "
                             f"table is for size {self.size}")
        return int(self.counts[kind][class_id])

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "directed": self.directed,
            "koef": {kind.value: self.counts[kind].tolist()
                     for kind in self.kinds},
        }


@lru_cache(maxsize=None)
def koef_table(size: int, directed: bool = False) -> KoefTable:
    """Enumerate frames inside each class representative."""
    table = arrcode_table(size, directed)
    counts = {}
    for kind in kinds_for_size(size):
        counter = _FRAME_COUNTERS[kind]
        vals = np.array(
            [counter(_undirected_view(c.canonical_code, size, directed))
             for c in table.classes], dtype=np.int64)
        vals.setflags(write=False)
        counts[kind] = vals
    return KoefTable(size, directed, MappingProxyType(counts))
