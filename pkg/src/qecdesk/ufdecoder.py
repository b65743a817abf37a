"""Deterministic bounded-pass union-find decoder.

The decoder runs on the local spacetime adjacency of a window: one
detector node per (check, round-slot), one shared virtual boundary
node, and an edge per data qubit (space within a slot, boundary where a
data edge leaves the check set) plus time edges between slots.

Growth is in half-edge units: a regular edge connects once it has
received two units (one from each side, or two passes from one side),
while a boundary edge connects after one unit because the virtual node
sits half an edge outside the lattice, so a defect adjacent to the
rough boundary touches it within a single grow pass.

Every loop iterates in sorted order and every arbitration rule is a
total order, so identical inputs produce bit-identical records:
  grow    all odd non-boundary clusters advance one half-edge
  merge   full edges united in ascending (min-root, max-root) order,
          each root in at most one union per sweep, losers retried
  peel    per cluster, a DFS spanning forest (ascending neighbor order)
          rooted at the boundary node if touched else the minimum-id
          node; a leaf edge is selected iff the leaf side holds odd
          residual defect parity
Budgets are hard: more than R_max grow passes or P_max total passes, or
an odd cluster with no boundary, fails closed with a FATAL record and
no correction edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import gf2
from .errors import InvalidParameter
from .flags import DESYNC, ERASURE, FATAL, OK
from .geometry import CodeSpec
from .noise import DetectionFrame

# Cost-model constants: parallel update lanes and cycles per update.
R_LANES = 32
C_UPD = 2

K_SPACE = "space"
K_TIME = "time"
K_BOUNDARY = "boundary"


@dataclass(frozen=True)
class Limits:
    r_max: int          # grow-pass budget; default is the code distance
    p_max: int          # total pass budget (grow passes + merge sweeps)

    def __post_init__(self):
        if self.r_max < 0 or self.p_max < 1:
            raise InvalidParameter("budgets must be nonnegative / positive")


def default_limits(code: CodeSpec) -> Limits:
    d = code.d or 3
    return Limits(r_max=d, p_max=10 * d)


@dataclass(frozen=True)
class UfEdge:
    u: int
    v: int
    kind: str
    data_edge: int      # lattice edge index; -1 for time edges
    full: int           # growth units needed to connect (1 boundary, 2 else)


class UfGraph:
    """Static per-(code, window) adjacency; shared by all decodes."""

    def __init__(self, code: CodeSpec, window: int):
        if window < 1:
            raise InvalidParameter("window must be >= 1")
        self.code = code
        self.window = window
        m = code.m_x
        self.n_detectors = window * m
        self.boundary_node = window * m
        edges: list[UfEdge] = []
        cols = gf2.transpose(code.h_x, code.n)
        for slot in range(window):
            base = slot * m
            for e, col in enumerate(cols):
                checks = gf2.vec_to_indices(col)
                if len(checks) == 2:
                    edges.append(UfEdge(base + checks[0], base + checks[1],
                                        K_SPACE, e, 2))
                elif len(checks) == 1:
                    edges.append(UfEdge(base + checks[0], self.boundary_node,
                                        K_BOUNDARY, e, 1))
            if slot + 1 < window:
                for j in range(m):
                    edges.append(UfEdge(base + j, base + m + j, K_TIME, -1, 2))
        self.edges = edges
        self.adj: list[list[int]] = [[] for _ in range(self.n_detectors + 1)]
        for eid, ed in enumerate(edges):
            self.adj[ed.u].append(eid)
            self.adj[ed.v].append(eid)


_graph_cache: dict[tuple[int, int], UfGraph] = {}


def _graph_for(code: CodeSpec, window: int) -> UfGraph:
    key = (id(code), window)
    g = _graph_cache.get(key)
    if g is None or g.code is not code:
        g = UfGraph(code, window)
        _graph_cache[key] = g
    return g


class FatalDecode(Exception):
    """Raised when the decoder must fail closed; carries the reason."""


@dataclass
class UfState:
    graph: UfGraph
    parent: list[int]
    rank: list[int]
    charge: list[int]
    boundary_touch: list[bool]
    radius: list[int]
    growth: list[int]
    defect_nodes: list[int]
    pending: list[int] = field(default_factory=list)   # full, unmerged edges
    pass_counter: int = 0
    grow_passes: int = 0
    dirty: bool = False
    flags: int = OK
    round_t: int = 0


def find(state: UfState, i: int) -> int:
    """Root of i with path halving; each step rewrites one parent link."""
    parent = state.parent
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


def union(state: UfState, a: int, b: int) -> int:
    """Merge by rank, then by smaller root id; returns the surviving root."""
    ra, rb = find(state, a), find(state, b)
    if ra == rb:
        return ra
    if state.rank[ra] < state.rank[rb]:
        ra, rb = rb, ra
    elif state.rank[ra] == state.rank[rb]:
        if rb < ra:
            ra, rb = rb, ra
        state.rank[ra] += 1
    state.parent[rb] = ra
    state.charge[ra] ^= state.charge[rb]
    state.boundary_touch[ra] = state.boundary_touch[ra] or state.boundary_touch[rb]
    state.radius[ra] = max(state.radius[ra], state.radius[rb])
    return ra


def load_window(frames: list[DetectionFrame], graph: UfGraph) -> UfState:
    """Seed one singleton charge-1 cluster per defect node."""
    if len(frames) != graph.window:
        raise InvalidParameter("frame count does not match the window")
    n = graph.n_detectors + 1
    state = UfState(
        graph=graph,
        parent=list(range(n)),
        rank=[0] * n,
        charge=[0] * n,
        boundary_touch=[False] * (n - 1) + [True],
        radius=[0] * n,
        growth=[0] * len(graph.edges),
        defect_nodes=[],
    )
    m = graph.code.m_x
    last_round = None
    for slot, frame in enumerate(frames):
        if last_round is not None and frame.round_t <= last_round:
            state.flags |= DESYNC
        last_round = frame.round_t
        if not frame.valid:
            state.flags |= ERASURE
            continue
        if frame.bits >> m:
            raise InvalidParameter("frame bits exceed the check count")
        for j in gf2.vec_to_indices(frame.bits):
            node = slot * m + j
            state.charge[node] = 1
            state.defect_nodes.append(node)
        state.flags |= frame.flags
    state.round_t = frames[-1].round_t
    return state


def _growing_roots(state: UfState) -> list[int]:
    roots = {find(state, d) for d in state.defect_nodes}
    return sorted(r for r in roots
                  if state.charge[r] == 1 and not state.boundary_touch[r])


def grow_pass(state: UfState) -> list[int]:
    """Advance every odd non-boundary cluster one half-edge; list new fulls."""
    growing = _growing_roots(state)
    state.dirty = False
    if not growing:
        return []
    gset = set(growing)
    new_full = []
    for eid, ed in enumerate(state.graph.edges):
        g = state.growth[eid]
        if g >= ed.full:
            continue
        ru = find(state, ed.u)
        rv = find(state, ed.v)
        if ru == rv:
            continue
        inc = (ru in gset) + (rv in gset)
        if not inc:
            continue
        g = min(ed.full, g + inc)
        state.growth[eid] = g
        state.dirty = True
        if g >= ed.full:
            new_full.append(eid)
    for r in growing:
        state.radius[r] += 1
    state.grow_passes += 1
    state.pass_counter += 1
    state.pending.extend(new_full)
    return new_full


def merge_pass(state: UfState, candidates: list[int]) -> list[int]:
    """One sweep: union candidates in ascending (min-root, max-root) order.

    A root joins at most one union per sweep; blocked candidates are
    returned for the next sweep.  Already-internal edges are dropped.
    """
    order = []
    for eid in candidates:
        ed = state.graph.edges[eid]
        ru, rv = find(state, ed.u), find(state, ed.v)
        if ru == rv:
            continue
        order.append(((min(ru, rv), max(ru, rv), eid), eid))
    order.sort()
    used: set[int] = set()
    deferred = []
    for _, eid in order:
        ed = state.graph.edges[eid]
        ru, rv = find(state, ed.u), find(state, ed.v)
        if ru == rv:
            continue
        if ru in used or rv in used:
            deferred.append(eid)
            continue
        winner = union(state, ru, rv)
        used.update((ru, rv, winner))
    state.pass_counter += 1
    state.pending = deferred
    return deferred


def peel(state: UfState) -> tuple[int, list[int]]:
    """Extract the correction chain; returns (data chain, selected edge ids).

    Fails closed (FatalDecode) if any cluster is odd with no boundary.
    """
    graph = state.graph
    clusters: dict[int, list[int]] = {}
    for node in range(graph.n_detectors + 1):
        r = find(state, node)
        clusters.setdefault(r, []).append(node)
    defect_roots = sorted({find(state, d) for d in state.defect_nodes})

    correction = 0
    selected: list[int] = []
    for root in defect_roots:
        if state.charge[root] == 1 and not state.boundary_touch[root]:
            raise FatalDecode("odd cluster with no boundary contact")
        members = clusters[root]
        mset = set(members)
        bnode = graph.boundary_node
        start = bnode if bnode in mset else min(members)

        # Deterministic DFS spanning forest over fully-grown internal
        # edges; depth-first keeps trees path-shaped so parity drains
        # along chains instead of fanning out from the root.  Visit-time
        # marking matters: a node first reachable from the root directly
        # and through a chain must join via the chain being walked.
        def grown_nbrs(u):
            out = []
            for eid in graph.adj[u]:
                ed = graph.edges[eid]
                if state.growth[eid] >= ed.full:
                    w = ed.v if ed.u == u else ed.u
                    if w in mset:
                        out.append((w, eid))
            out.sort()
            return out

        parent_edge: dict[int, tuple[int, int]] = {}   # node -> (parent, eid)
        order = [start]
        seen = {start}
        stack = [(start, iter(grown_nbrs(start)))]
        while stack:
            u, it = stack[-1]
            for w, eid in it:
                if w not in seen:
                    seen.add(w)
                    parent_edge[w] = (u, eid)
                    order.append(w)
                    stack.append((w, iter(grown_nbrs(w))))
                    break
            else:
                stack.pop()
        if seen != mset:
            raise FatalDecode("cluster not connected by grown edges")

        dset = set(state.defect_nodes)
        parity = {node: 1 if node in dset else 0 for node in members}
        for node in reversed(order):
            if node == start:
                continue
            up, eid = parent_edge[node]
            if parity[node]:
                parity[node] = 0
                parity[up] ^= 1
                ed = graph.edges[eid]
                if ed.data_edge >= 0:
                    correction ^= 1 << ed.data_edge
                selected.append(eid)
        if start != bnode and parity[start]:
            raise FatalDecode("residual defect parity at cluster root")
    return correction, selected


@dataclass
class CorrectionRecord:
    cfg_id: int
    round_t: int
    correction: int                  # packed over data edges
    logical_delta: tuple[int, ...]   # overlap parity with dual logicals
    flags: int
    a_t: int = 0
    f_t: int = 0
    grow_passes: int = 0
    total_passes: int = 0
    modeled_cycles: int = 0
    fatal_reason: str = ""


def _check_selection(state: UfState, selected: list[int]) -> None:
    """Spacetime consistency: selected-edge parity equals each defect bit."""
    graph = state.graph
    par = [0] * (graph.n_detectors + 1)
    for eid in selected:
        ed = graph.edges[eid]
        par[ed.u] ^= 1
        par[ed.v] ^= 1
    want = [0] * (graph.n_detectors + 1)
    for d in state.defect_nodes:
        want[d] ^= 1
    for node in range(graph.n_detectors):
        if par[node] != want[node]:
            raise FatalDecode(f"correction does not reproduce defect {node}")


def decode_window(frames: list[DetectionFrame], code: CodeSpec,
                  limits: Limits | None = None,
                  cfg_id: int = 0) -> CorrectionRecord:
    """load -> (grow, merge sweeps) x <= R_max -> peel, all budget-checked."""
    if not frames:
        raise InvalidParameter("window needs at least one frame")
    limits = limits or default_limits(code)
    graph = _graph_for(code, len(frames))
    state = load_window(frames, graph)

    def record(correction, logical, flags, reason=""):
        peel_cost = len(state.defect_nodes) + gf2.weight(correction)
        cycles = (state.pass_counter * -(-graph.n_detectors // R_LANES) * C_UPD
                  + peel_cost * C_UPD)
        return CorrectionRecord(
            cfg_id=cfg_id, round_t=state.round_t, correction=correction,
            logical_delta=logical, flags=flags,
            grow_passes=state.grow_passes, total_passes=state.pass_counter,
            modeled_cycles=cycles, fatal_reason=reason)

    if state.flags & DESYNC:
        return record(0, (0,) * code.k, state.flags)

    try:
        while _growing_roots(state):
            if state.grow_passes >= limits.r_max:
                raise FatalDecode("grow budget exhausted")
            if state.pass_counter >= limits.p_max:
                raise FatalDecode("pass budget exhausted")
            grow_pass(state)
            while state.pending:
                if state.pass_counter >= limits.p_max:
                    raise FatalDecode("pass budget exhausted")
                merge_pass(state, state.pending)
        correction, selected = peel(state)
        _check_selection(state, selected)
    except FatalDecode as exc:
        return record(0, (0,) * code.k, state.flags | FATAL, str(exc))

    logical = tuple(gf2.parity(correction & lx) for lx in code.logical_x)
    return record(correction, logical, state.flags)
