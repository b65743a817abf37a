"""Spacetime decoding graphs with log-likelihood edge weights.

Nodes are (check, round-slot) pairs at linear id slot*m_X + check, plus
one shared virtual boundary node with the highest id.  Space edges join
same-round checks that share a data qubit, time edges join the same
check across consecutive rounds, and every check also gets a boundary
edge whose weight is the cheapest data-edge path to a rough boundary
(planar codes only; a torus has no boundary).

Weights are ln((1-p)/p), kept as floats but compared through a fixed
2^-32 quantization so that ties resolve identically on every platform.
Equal-weight paths tie-break to the lexicographically smallest node-id
sequence.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

from . import gf2
from .errors import InvalidParameter
from .geometry import CodeSpec

_QUANT = 1 << 32

SPACE = "space"
TIME = "time"
BOUNDARY = "boundary"


def edge_weight(p: float) -> float:
    """Log-likelihood weight of a flip channel; zero exactly at p = 1/2."""
    if not 0.0 < p < 1.0:
        raise InvalidParameter("probability must lie strictly inside (0, 1)")
    return math.log((1.0 - p) / p)


def _quantize(w: float) -> int:
    return round(w * _QUANT)


@dataclass(frozen=True)
class GraphEdge:
    u: int
    v: int
    kind: str
    weight: float
    qweight: int
    data_edges: tuple[int, ...]   # lattice edges realized by this graph edge


@dataclass
class DecodingGraph:
    code: CodeSpec
    window: int
    edges: list[GraphEdge]
    adj: list[list[int]]          # node -> incident edge ids

    @property
    def m_x(self) -> int:
        return self.code.m_x

    @property
    def n_nodes(self) -> int:
        return self.window * self.code.m_x + 1

    @property
    def boundary_node(self) -> int:
        return self.window * self.code.m_x

    def node(self, check: int, slot: int) -> int:
        return slot * self.code.m_x + check


def _lattice_vertex_adj(code: CodeSpec) -> tuple[dict, set]:
    """Vertex adjacency of the planar lattice plus its rough vertex set."""
    d = code.d
    adj: dict[tuple, list] = {}
    for (kind, r, c), e in code.edge_index.items():
        a = (r, c)
        b = (r, c + 1) if kind == "h" else (r + 1, c)
        adj.setdefault(a, []).append((b, e))
        adj.setdefault(b, []).append((a, e))
    rough = {(r, c) for r in range(d) for c in (0, d)}
    return adj, rough


def _boundary_paths(code: CodeSpec) -> dict[int, tuple[int, ...]]:
    """Per check: the cheapest data-edge path to a rough boundary vertex.

    Multi-source BFS from the rough columns (uniform weights), then a
    greedy walk that always steps to the smallest-index vertex among
    those one hop closer, which realizes the lexicographic tie-break.
    """
    adj, rough = _lattice_vertex_adj(code)
    dist = {v: 0 for v in rough}
    frontier = sorted(rough)
    while frontier:
        nxt = []
        for v in frontier:
            for w, _ in sorted(adj.get(v, ())):
                if w not in dist:
                    dist[w] = dist[v] + 1
                    nxt.append(w)
        frontier = sorted(set(nxt))
    paths = {}
    for (r, c), check in code.x_check_index.items():
        v = (r, c)
        path = []
        while dist[v] > 0:
            step = min((w, e) for w, e in adj[v] if dist.get(w, 1 << 30) == dist[v] - 1)
            path.append(step[1])
            v = step[0]
        paths[check] = tuple(path)
    return paths


def build_spacetime(code: CodeSpec, window: int,
                    p_data: float, q_meas: float) -> DecodingGraph:
    """W round-slots of the check set wired with space/time/boundary edges."""
    if window < 1:
        raise InvalidParameter("window must be >= 1")
    w_space = edge_weight(p_data)
    w_time = edge_weight(q_meas) if window > 1 else 0.0

    m = code.m_x
    edges: list[GraphEdge] = []
    adj: list[list[int]] = [[] for _ in range(window * m + 1)]
    bnode = window * m

    def add(u, v, kind, w, data_edges):
        eid = len(edges)
        edges.append(GraphEdge(u, v, kind, w, _quantize(w), tuple(data_edges)))
        adj[u].append(eid)
        adj[v].append(eid)

    cols = gf2.transpose(code.h_x, code.n)
    pair_edges = []        # data edges seen by exactly two checks
    for e, col in enumerate(cols):
        checks = gf2.vec_to_indices(col)
        if len(checks) == 2:
            pair_edges.append((e, checks[0], checks[1]))

    bpaths = _boundary_paths(code) if code.kind == "planar" else {}

    for slot in range(window):
        base = slot * m
        for e, a, b in pair_edges:
            add(base + a, base + b, SPACE, w_space, (e,))
        for check in range(m):
            path = bpaths.get(check)
            if path:
                add(base + check, bnode, BOUNDARY, w_space * len(path), path)
        if slot + 1 < window:
            for check in range(m):
                add(base + check, base + m + check, TIME, w_time, ())
    return DecodingGraph(code=code, window=window, edges=edges, adj=adj)


@dataclass(frozen=True)
class PathResult:
    weight: float
    qweight: int
    nodes: tuple[int, ...]
    data_edges: tuple[int, ...]
    reachable: bool = True


_UNREACHABLE = PathResult(math.inf, -1, (), (), reachable=False)


def _dijkstra(graph: DecodingGraph, source: int) -> list[int]:
    """Quantized distances from source; -1 marks unreachable nodes."""
    dist = [-1] * graph.n_nodes
    heap = [(0, source)]
    while heap:
        dq, u = heapq.heappop(heap)
        if dist[u] != -1:
            continue
        dist[u] = dq
        for eid in graph.adj[u]:
            ed = graph.edges[eid]
            v = ed.v if ed.u == u else ed.u
            if dist[v] == -1:
                heapq.heappush(heap, (dq + ed.qweight, v))
    return dist


def shortest_distance(graph: DecodingGraph, u: int, v: int) -> PathResult:
    """Minimal-weight path u -> v with the lexicographic tie-break.

    Distances are computed backward from v, then the path is walked from
    u by always taking the smallest-id next node that stays on a minimal
    path, so the returned node sequence is the lexicographically least
    of all minimum-weight paths.
    """
    if not (0 <= u < graph.n_nodes and 0 <= v < graph.n_nodes):
        raise InvalidParameter("node id out of range")
    if u == v:
        return PathResult(0.0, 0, (u,), ())
    dist = _dijkstra(graph, v)
    if dist[u] == -1:
        return _UNREACHABLE
    nodes = [u]
    data: list[int] = []
    total = 0.0
    cur = u
    seen = {u}
    while cur != v:
        best = None
        for eid in graph.adj[cur]:
            ed = graph.edges[eid]
            w = ed.v if ed.u == cur else ed.u
            if w in seen or dist[w] == -1 or dist[w] + ed.qweight != dist[cur]:
                continue
            key = (w, ed.qweight, ed.data_edges)
            if best is None or key < best[0]:
                best = (key, ed, w)
        if best is None:
            # Only reachable through zero-weight cycles (p = 1/2 regions).
            raise InvalidParameter("no simple minimal path; degenerate weights")
        _, ed, w = best
        nodes.append(w)
        data.extend(ed.data_edges)
        total += ed.weight
        cur = w
        seen.add(w)
    return PathResult(total, dist[u], tuple(nodes), tuple(data))
