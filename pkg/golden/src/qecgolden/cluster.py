"""Reference union-find decoder over a spacetime window.

Every arbitration rule here is part of the published tie-break
contract (TIE_BREAK_RULE in the conformance contract); the point of
this file is to restate those rules in the plainest possible Python:

  nodes      one detector per (round slot, check), plus one virtual
             boundary node shared by the whole window
  edges      per slot, the lattice's data edges in index order (edges
             with one check attach to the boundary and fill at one
             growth unit; edges with two checks fill at two), then one
             time edge per check between consecutive slots (fill two);
             edge ids follow this exact construction order
  grow       all clusters with odd defect parity and no boundary
             contact advance together; edges are visited in ascending
             id and gain one unit per growing endpoint cluster
  merge      filled edges unite in ascending (smaller root, larger
             root, edge id) order; a root joins at most one union per
             sweep and blocked edges wait for the next sweep; unions
             pick the higher rank, breaking rank ties toward the
             smaller root id (which then gains a rank)
  peel       per cluster, a preorder depth-first spanning forest
             (neighbors in ascending (node, edge id) order) rooted at
             the boundary when touched, else at the smallest node;
             walking leaves-to-root, an edge is kept iff the child side
             still holds odd defect parity
  budgets    more grow passes than R_max, more total passes than P_max,
             or an odd cluster with no boundary at peel time, fails
             closed: FATAL flag, empty correction

The modeled cost charged to a decode is
    passes * ceil(detectors / 32) * 2  +  (defects + kept edges) * 2
i.e. every pass sweeps all detectors in 32-wide lanes at two cycles per
update, and the peel stage pays two cycles per defect and kept edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import flagbits as fb
from .lattice import Lattice, logical_bits

COST_LANES = 32
COST_PER_UPDATE = 2

DATA_NONE = -1          # time edges carry no lattice edge


@dataclass(frozen=True)
class WindowEdge:
    lo: int             # endpoint node ids; lo < hi except vs boundary
    hi: int
    data_edge: int      # lattice edge id, or DATA_NONE for time edges
    fill_at: int        # growth units needed to connect (1 boundary, 2 else)


class WindowGraph:
    """Static adjacency for (lattice, window length); reused per decode."""

    def __init__(self, lat: Lattice, window: int):
        if window < 1:
            raise ValueError("window must be >= 1")
        self.lattice = lat
        self.window = window
        m = lat.n_checks
        self.n_detectors = window * m
        self.boundary = window * m
        edges: list[WindowEdge] = []
        for slot in range(window):
            base = slot * m
            for e, checks in enumerate(lat.edge_checks):
                if len(checks) == 2:
                    edges.append(WindowEdge(base + checks[0],
                                            base + checks[1], e, 2))
                elif len(checks) == 1:
                    edges.append(WindowEdge(base + checks[0],
                                            self.boundary, e, 1))
            if slot + 1 < window:
                for j in range(m):
                    edges.append(WindowEdge(base + j, base + m + j,
                                            DATA_NONE, 2))
        self.edges = edges
        self.touching: list[list[int]] = [[] for _ in range(self.boundary + 1)]
        for eid, edge in enumerate(edges):
            self.touching[edge.lo].append(eid)
            self.touching[edge.hi].append(eid)


@dataclass
class DecodeOutcome:
    round_t: int
    flags: int
    correction_edges: set
    logical: tuple
    defects: int
    passes: int
    grow_passes: int


class FailClosed(Exception):
    """Internal signal: abandon the decode and emit a FATAL record."""


class WindowDecoder:
    """One decode per call; all mutable state lives in the call frame."""

    def __init__(self, graph: WindowGraph, r_max: int, p_max: int):
        self.graph = graph
        self.r_max = r_max
        self.p_max = p_max

    # -- disjoint sets ---------------------------------------------------

    def _root(self, node: int) -> int:
        parent = self.parent
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    def _unite(self, a: int, b: int) -> int:
        """Higher rank wins; rank ties go to the smaller id, which gains
        a rank.  Charge adds mod 2 and boundary contact is sticky."""
        ra, rb = self._root(a), self._root(b)
        if ra == rb:
            return ra
        if self.rank[ra] < self.rank[rb]:
            ra, rb = rb, ra
        elif self.rank[ra] == self.rank[rb]:
            if rb < ra:
                ra, rb = rb, ra
            self.rank[ra] += 1
        self.parent[rb] = ra
        self.charge[ra] ^= self.charge[rb]
        self.touches_boundary[ra] = (self.touches_boundary[ra]
                                     or self.touches_boundary[rb])
        return ra

    # -- stages ----------------------------------------------------------

    def _active_roots(self) -> list[int]:
        roots = {self._root(d) for d in self.defects}
        return sorted(r for r in roots
                      if self.charge[r] == 1 and not self.touches_boundary[r])

    def _grow(self) -> None:
        active = set(self._active_roots())
        newly_filled = []
        for eid, edge in enumerate(self.graph.edges):
            units = self.growth[eid]
            if units >= edge.fill_at:
                continue
            ru = self._root(edge.lo)
            rv = self._root(edge.hi)
            if ru == rv:
                continue
            gain = (ru in active) + (rv in active)
            if gain == 0:
                continue
            units = min(edge.fill_at, units + gain)
            self.growth[eid] = units
            if units >= edge.fill_at:
                newly_filled.append(eid)
        self.grow_passes += 1
        self.passes += 1
        self.waiting.extend(newly_filled)

    def _merge_sweep(self) -> None:
        ordered = []
        for eid in self.waiting:
            edge = self.graph.edges[eid]
            ru, rv = self._root(edge.lo), self._root(edge.hi)
            if ru == rv:
                continue
            ordered.append((min(ru, rv), max(ru, rv), eid))
        ordered.sort()
        blocked = []
        taken: set[int] = set()
        for _, _, eid in ordered:
            edge = self.graph.edges[eid]
            ru, rv = self._root(edge.lo), self._root(edge.hi)
            if ru == rv:
                continue
            if ru in taken or rv in taken:
                blocked.append(eid)
                continue
            winner = self._unite(ru, rv)
            taken.update((ru, rv, winner))
        self.passes += 1
        self.waiting = blocked

    def _filled_neighbors(self, node: int, members: set) -> list:
        out = []
        for eid in self.graph.touching[node]:
            edge = self.graph.edges[eid]
            if self.growth[eid] >= edge.fill_at:
                other = edge.hi if edge.lo == node else edge.lo
                if other in members:
                    out.append((other, eid))
        out.sort()
        return out

    def _peel(self) -> tuple[set, list]:
        graph = self.graph
        members_of: dict[int, list] = {}
        for node in range(graph.n_detectors + 1):
            members_of.setdefault(self._root(node), []).append(node)
        defect_roots = sorted({self._root(d) for d in self.defects})

        kept_data: set = set()
        kept_edges: list = []
        defect_set = set(self.defects)
        for root in defect_roots:
            if self.charge[root] == 1 and not self.touches_boundary[root]:
                raise FailClosed("odd cluster with no boundary contact")
            members = set(members_of[root])
            start = (graph.boundary if graph.boundary in members
                     else min(members))

            # Preorder DFS with visit-time marking: a node joins the
            # forest through whichever chain reaches it first, keeping
            # trees path-shaped so parity drains along the chain.
            via: dict[int, tuple] = {}
            visit_order = [start]
            seen = {start}
            stack = [(start, iter(self._filled_neighbors(start, members)))]
            while stack:
                node, neighbors = stack[-1]
                advanced = False
                for other, eid in neighbors:
                    if other in seen:
                        continue
                    seen.add(other)
                    via[other] = (node, eid)
                    visit_order.append(other)
                    stack.append(
                        (other, iter(self._filled_neighbors(other, members))))
                    advanced = True
                    break
                if not advanced:
                    stack.pop()
            if seen != members:
                raise FailClosed("cluster not connected by grown edges")

            parity = {node: 1 if node in defect_set else 0
                      for node in members}
            for node in reversed(visit_order):
                if node == start:
                    continue
                above, eid = via[node]
                if parity[node]:
                    parity[node] = 0
                    parity[above] ^= 1
                    edge = graph.edges[eid]
                    if edge.data_edge != DATA_NONE:
                        kept_data.symmetric_difference_update(
                            (edge.data_edge,))
                    kept_edges.append(eid)
            if start != graph.boundary and parity[start]:
                raise FailClosed("residual defect parity at cluster root")
        return kept_data, kept_edges

    def _audit(self, kept_edges: list) -> None:
        """Kept-edge parity at every detector must equal its defect bit."""
        got = [0] * (self.graph.n_detectors + 1)
        for eid in kept_edges:
            edge = self.graph.edges[eid]
            got[edge.lo] ^= 1
            got[edge.hi] ^= 1
        want = [0] * (self.graph.n_detectors + 1)
        for d in self.defects:
            want[d] ^= 1
        for node in range(self.graph.n_detectors):
            if got[node] != want[node]:
                raise FailClosed(f"correction does not reproduce defect {node}")

    # -- entry point -------------------------------------------------------

    def decode(self, frames: list) -> DecodeOutcome:
        """frames: (round_t, event_bits, packet_flags) per window slot."""
        graph = self.graph
        if len(frames) != graph.window:
            # a short tail window decodes against a graph of its own length
            raise ValueError("frame count does not match this graph")
        m = graph.lattice.n_checks
        size = graph.n_detectors + 1
        self.parent = list(range(size))
        self.rank = [0] * size
        self.charge = [0] * size
        self.touches_boundary = [False] * graph.n_detectors + [True]
        self.growth = [0] * len(graph.edges)
        self.defects: list[int] = []
        self.waiting: list[int] = []
        self.passes = 0
        self.grow_passes = 0

        flags = fb.OK
        previous_round = None
        for slot, (round_t, bits, packet_flags) in enumerate(frames):
            if previous_round is not None and round_t <= previous_round:
                flags |= fb.DESYNC
            previous_round = round_t
            if bits >> m:
                raise ValueError("frame bits exceed the check count")
            for j in range(m):
                if (bits >> j) & 1:
                    node = slot * m + j
                    self.charge[node] = 1
                    self.defects.append(node)
            flags |= packet_flags
        round_t = frames[-1][0]

        def outcome(correction: set, flags: int) -> DecodeOutcome:
            logical = logical_bits(graph.lattice, correction)
            return DecodeOutcome(round_t=round_t, flags=flags,
                                 correction_edges=correction,
                                 logical=logical, defects=len(self.defects),
                                 passes=self.passes,
                                 grow_passes=self.grow_passes)

        if flags & fb.DESYNC:
            # round numbering went backwards inside the window: the
            # window cannot be trusted, so no correction is claimed
            return outcome(set(), flags)

        try:
            while self._active_roots():
                if self.grow_passes >= self.r_max:
                    raise FailClosed("grow budget exhausted")
                if self.passes >= self.p_max:
                    raise FailClosed("pass budget exhausted")
                self._grow()
                while self.waiting:
                    if self.passes >= self.p_max:
                        raise FailClosed("pass budget exhausted")
                    self._merge_sweep()
            correction, kept_edges = self._peel()
            self._audit(kept_edges)
        except FailClosed:
            return outcome(set(), flags | fb.FATAL)
        return outcome(correction, flags)


def modeled_cycles(graph: WindowGraph, out: DecodeOutcome) -> int:
    lanes = -(-graph.n_detectors // COST_LANES)
    peel_cost = out.defects + len(out.correction_edges)
    return out.passes * lanes * COST_PER_UPDATE + peel_cost * COST_PER_UPDATE
