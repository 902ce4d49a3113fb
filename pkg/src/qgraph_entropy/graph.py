"""Metric graphs: vertices, edges with lengths, and the derived directed bonds.

Bond indexing is fixed once at construction.  Edge ``k = (i, j, L)`` (in
input order) owns bonds ``2k`` and ``2k + 1``:

* bond ``2k``     runs from origin ``i`` to terminus ``j``;
* bond ``2k + 1`` runs from origin ``j`` to terminus ``i``.

so ``reverse(b) == b ^ 1``.  A coordinate ``x`` on bond ``b`` is 0 at the
origin and ``L_b`` at the terminus.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DisconnectedGraph, DuplicateEdge, GraphError, LoopEdge, NonpositiveLength, OutOfRange


class AcyclicType:
    """Marker returned by :func:`girth` for forests."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Acyclic"

    def __bool__(self):
        return False


Acyclic = AcyclicType()


@dataclass(frozen=True)
class MetricGraph:
    """Connected simple graph with positive edge lengths.

    Build through :func:`build_metric_graph` or :func:`star_metric_graph`;
    the constructor itself trusts its input.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]
    bond_origin: np.ndarray = field(repr=False, compare=False)
    bond_terminus: np.ndarray = field(repr=False, compare=False)
    bond_length: np.ndarray = field(repr=False, compare=False)

    @property
    def V(self) -> int:
        return self.vertex_count

    @property
    def E(self) -> int:
        return len(self.edges)

    @property
    def B(self) -> int:
        return 2 * len(self.edges)

    @property
    def total_length(self) -> float:
        return float(sum(e[2] for e in self.edges))

    @property
    def edge_lengths(self) -> np.ndarray:
        return np.array([e[2] for e in self.edges], dtype=float)

    def reverse(self, b: int) -> int:
        return b ^ 1

    def edge_of(self, b: int) -> int:
        return b >> 1

    def degrees(self) -> np.ndarray:
        return np.bincount(self.bond_origin, minlength=self.vertex_count)

    def degree(self, v: int) -> int:
        return int(self.degrees()[v])

    def outgoing(self, v: int) -> list[int]:
        """Bonds leaving ``v``, ordered by edge index."""
        return [int(b) for b in np.flatnonzero(self.bond_origin == v)]

    def incoming(self, v: int) -> list[int]:
        """Bonds entering ``v``; entry ``k`` is the reverse of ``outgoing(v)[k]``."""
        return [b ^ 1 for b in self.outgoing(v)]

    def neighbours(self, v: int) -> list[int]:
        return [int(self.bond_terminus[b]) for b in self.outgoing(v)]

    def adjacency(self) -> np.ndarray:
        adj = np.zeros((self.vertex_count, self.vertex_count), dtype=bool)
        adj[self.bond_origin, self.bond_terminus] = True
        return adj


@dataclass(frozen=True)
class BondCoordinate:
    bond: int
    x: float


def build_metric_graph(edge_list: Sequence[Sequence[float]], vertex_count: int | None = None) -> MetricGraph:
    """Validate an edge list and derive the bond structure.

    Parameters
    ----------
    edge_list : sequence of (i, j, length)
        Undirected edges.  Their order fixes the bond indexing.
    vertex_count : int, optional
        Number of vertices.  Defaults to one more than the largest index;
        passing it explicitly lets isolated vertices be detected.
    """
    edges = []
    seen = {}
    for k, item in enumerate(edge_list):
        if len(item) != 3:
            raise GraphError(f"edge {k} must be (i, j, length), got {item!r}")
        i, j, length = item
        if int(i) != i or int(j) != j:
            raise GraphError(f"edge {k} {item!r}: vertex indices must be integers")
        i, j, length = int(i), int(j), float(length)
        if i < 0 or j < 0:
            raise GraphError(f"edge {k} {item!r}: negative vertex index")
        if i == j:
            raise LoopEdge(f"edge {k} ({i}, {j}) is a loop")
        if not length > 0 or not np.isfinite(length):
            raise NonpositiveLength(f"edge {k} ({i}, {j}) has length {length}")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise DuplicateEdge(f"edge {k} ({i}, {j}) duplicates edge {seen[key]}")
        seen[key] = k
        edges.append((i, j, length))
    if not edges:
        raise GraphError("a metric graph needs at least one edge")

    top = max(max(i, j) for i, j, _ in edges) + 1
    if vertex_count is None:
        vertex_count = top
    elif top > vertex_count:
        bad = next((i, j) for i, j, _ in edges if max(i, j) >= vertex_count)
        raise GraphError(f"edge {bad} references a vertex >= vertex_count={vertex_count}")

    origin = np.empty(2 * len(edges), dtype=np.intp)
    terminus = np.empty_like(origin)
    blen = np.empty(2 * len(edges))
    for k, (i, j, length) in enumerate(edges):
        origin[2 * k], terminus[2 * k] = i, j
        origin[2 * k + 1], terminus[2 * k + 1] = j, i
        blen[2 * k] = blen[2 * k + 1] = length
    for arr in (origin, terminus, blen):
        arr.setflags(write=False)

    g = MetricGraph(vertex_count, tuple(edges), origin, terminus, blen)
    reached = _bfs_distances(g, 0)
    missing = [v for v in range(vertex_count) if reached[v] < 0]
    if missing:
        # name an edge from the part not reachable from vertex 0, if any
        offending = next(((i, j) for i, j, _ in edges if reached[i] < 0), None)
        what = f"edge {offending}" if offending else f"vertex {missing[0]}"
        raise DisconnectedGraph(f"graph is disconnected: {what} is not reachable from vertex 0")
    return g


def star_metric_graph(E: int, lengths: Sequence[float]) -> MetricGraph:
    """Star with center 0 and pendant vertices ``1..E``; edge ``j - 1`` has length ``lengths[j - 1]``."""
    if E < 1:
        raise GraphError(f"a star needs E >= 1 edges, got {E}")
    if len(lengths) != E:
        raise GraphError(f"expected {E} lengths, got {len(lengths)}")
    for j, length in enumerate(lengths):
        if not length > 0:
            raise NonpositiveLength(f"edge {j} (0, {j + 1}) has length {length}")
    return build_metric_graph([(0, j + 1, lengths[j]) for j in range(E)])


def complete_metric_graph(n: int, lengths: Sequence[float]) -> MetricGraph:
    """Complete graph K_n; edges enumerated lexicographically."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    if len(lengths) != len(pairs):
        raise GraphError(f"K_{n} has {len(pairs)} edges, got {len(lengths)} lengths")
    return build_metric_graph([(i, j, L) for (i, j), L in zip(pairs, lengths)])


def reversed_coordinate(g: MetricGraph, b: int, x: float) -> BondCoordinate:
    if not 0 <= b < g.B:
        raise OutOfRange(f"bond {b} not in 0..{g.B - 1}")
    L = g.bond_length[b]
    if not 0.0 <= x <= L:
        raise OutOfRange(f"x={x} outside [0, {L}] on bond {b}")
    return BondCoordinate(b ^ 1, float(L - x))


def _bfs_distances(g: MetricGraph, root: int) -> np.ndarray:
    dist = np.full(g.vertex_count, -1, dtype=np.intp)
    dist[root] = 0
    nbrs = _neighbour_lists(g)
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in nbrs[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    return dist


def _neighbour_lists(g: MetricGraph) -> list[list[int]]:
    nbrs: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for i, j, _ in g.edges:
        nbrs[i].append(j)
        nbrs[j].append(i)
    return nbrs


def girth(g: MetricGraph):
    """Length of the shortest cycle, or :data:`Acyclic` for trees.

    One BFS per root; a non-tree edge ``(u, w)`` met from root ``r`` closes
    a closed walk of length ``dist[u] + dist[w] + 1`` through ``r``, and the
    minimum over all roots is attained by a genuine shortest cycle.
    """
    if g.E == g.V - 1:
        return Acyclic
    nbrs = _neighbour_lists(g)
    best = None
    for root in range(g.vertex_count):
        dist = [-1] * g.vertex_count
        parent = [-1] * g.vertex_count
        dist[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            if best is not None and 2 * dist[u] >= best:
                break
            for w in nbrs[u]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    cycle = dist[u] + dist[w] + 1
                    if best is None or cycle < best:
                        best = cycle
    return best if best is not None else Acyclic


def diameter(g: MetricGraph) -> int:
    """Combinatorial diameter (edge count of the longest shortest path)."""
    return int(max(_bfs_distances(g, v).max() for v in range(g.vertex_count)))


def regular_degree(g: MetricGraph) -> int | None:
    """Common vertex degree if ``g`` is regular, else ``None``."""
    deg = g.degrees()
    return int(deg[0]) if np.all(deg == deg[0]) else None


def is_regular(g: MetricGraph, d: int) -> bool:
    return regular_degree(g) == d


def star_center(g: MetricGraph) -> int | None:
    """Center vertex if ``g`` is a star with at least two edges, else ``None``.

    For a single edge both ends qualify and vertex 0 is returned.
    """
    if g.E != g.V - 1:
        return None
    deg = g.degrees()
    if g.E == 1:
        return 0
    hubs = np.flatnonzero(deg == g.E)
    if len(hubs) == 1 and np.all(np.delete(deg, hubs[0]) == 1):
        return int(hubs[0])
    return None
