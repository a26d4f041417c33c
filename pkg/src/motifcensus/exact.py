"""Exact motif census by connected-subgraph enumeration.

Connected vertex sets are generated once each by rooted extension: start at
a root vertex, keep an extension frontier of neighbors with ids above the
root that are not yet adjacent to the growing set, and branch on frontier
vertices.  Each emitted set is classified through the lookup tables.

Frame enumeration lives here too as a slow reference for the closed-form
totals; it is guarded so it only runs on small graphs.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from .canon import arrcode_table
from .frames import FrameKind, FrameSample, frame_totals
from .graphs import Graph, induced_subgraph_codes

FRAME_CHECK_LIMIT = 10_000
_FLUSH = 8192


@dataclass
class ExactCensus:
    """Exact counts for every connected class of one size."""

    size: int
    directed: bool
    counts: dict[int, int]
    elapsed: float

    def nonzero(self) -> dict[int, int]:
        return {cid: c for cid, c in self.counts.items() if c}

    def total(self) -> int:
        return sum(self.counts.values())

    def to_dict(self) -> dict:
        return {
            "size": self.size,
            "directed": self.directed,
            "counts": {str(cid): c for cid, c in self.counts.items()},
            "elapsed": self.elapsed,
        }


def connected_vertex_sets(g: Graph, size: int) -> Iterator[tuple[int, ...]]:
    """Yield every connected vertex set of the given size exactly once."""
    if size < 2:
        raise ValueError(f"set size must be at least 2, got {size}")
    adj = g.adjacency_sets
    for root in range(g.n_vertices):
        ext = {u for u in adj[root] if u > root}
        if ext:
            yield from _extend((root,), ext, adj[root] | {root}, root, adj,
                               size)


def _extend(sub, ext, seen, root, adj, size):
    # seen holds the set plus its whole neighborhood; only vertices outside
    # it (and above the root) may enter the frontier, so no set repeats
    if len(sub) + 1 == size:
        for w in ext:
            yield sub + (w,)
        return
    ext = set(ext)
    while ext:
        w = ext.pop()
        grow = {u for u in adj[w] if u > root and u not in seen}
        yield from _extend(sub + (w,), ext | grow, seen | adj[w], root, adj,
                           size)


def exact_census(g: Graph, size: int) -> ExactCensus:
    """Count every connected motif class of one size exactly."""
    t0 = time.perf_counter()
    if size not in (3, 4):
        raise ValueError(f"motif size must be 3 or 4, got {size}")
    table = arrcode_table(size, g.directed)
    counts = np.zeros(table.n_classes, dtype=np.int64)

    def flush(buf):
        verts = np.array(buf, dtype=np.int64).T
        codes = induced_subgraph_codes(g, verts)
        np.add.at(counts, table.entries[codes], 1)

    buf = []
    for vs in connected_vertex_sets(g, size):
        buf.append(vs)
        if len(buf) >= _FLUSH:
            flush(buf)
            buf = []
    if buf:
        flush(buf)

    by_class = {cls.class_id: int(counts[cls.class_id])
                for cls in table.classes if cls.connected}
    return ExactCensus(size, g.directed, by_class,
                       time.perf_counter() - t0)


def enumerate_frames(g: Graph, kind: FrameKind) -> Iterator[FrameSample]:
    """Walk every frame instance; chain outcomes include degenerate ones."""
    kind = FrameKind(kind)
    adj = g.adjacency_sets
    if kind is FrameKind.FORK:
        for c in range(g.n_vertices):
            for a, b in combinations(sorted(adj[c]), 2):
                yield FrameSample(kind, (a, c, b))
    elif kind is FrameKind.TRIDENT:
        for c in range(g.n_vertices):
            for t in combinations(sorted(adj[c]), 3):
                yield FrameSample(kind, (c,) + t)
    else:
        for u, v in zip(g.edge_u.tolist(), g.edge_v.tolist()):
            for a in sorted(adj[u] - {v}):
                for b in sorted(adj[v] - {u}):
                    yield FrameSample(kind, (a, u, v, b), degenerate=a == b)


def exact_frame_check(g: Graph, kind: FrameKind) -> int:
    """Count frames by enumeration; refuses graphs with too many."""
    kind = FrameKind(kind)
    total = frame_totals(g).for_kind(kind)
    if total > FRAME_CHECK_LIMIT:
        raise ValueError(
            f"{total} {kind.value} instances exceed the enumeration "
            f"limit of {FRAME_CHECK_LIMIT}")
    return sum(1 for _ in enumerate_frames(g, kind))
