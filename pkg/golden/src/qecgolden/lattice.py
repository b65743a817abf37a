"""Check/edge incidence for the two supported lattices, by coordinates.

Shared indexing contract (what traces, records, and corrections mean):

  planar, distance d
    data edges: horizontal ("h", r, c) for r in [0,d), c in [0,d),
    row-major, then vertical ("v", r, c) for r in [0,d-1), c in [1,d),
    row-major.  Vertex (r, c) carries a check iff 1 <= c <= d-1;
    check id = r*(d-1) + (c-1).  Edges whose second endpoint falls
    outside the check columns have a single check: those are the
    boundary edges.
  toric, side L
    data edges: horizontal then vertical, row-major L x L each; every
    vertex (r, c) is a check with id r*L + c, and every edge has
    exactly two checks (wraparound).

The reference derives each edge's checks from its endpoint coordinates
instead of reading a parity matrix, so the two implementations can only
agree if the geometric convention itself matches.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Lattice:
    kind: str
    size: int
    n_edges: int
    n_checks: int
    k: int
    edge_checks: tuple[tuple[int, ...], ...]   # per edge, ascending check ids
    logical_edge_sets: tuple[frozenset, ...]   # one edge set per logical bit


def _planar(d: int) -> Lattice:
    def check_id(r: int, c: int) -> int | None:
        if 0 <= r < d and 1 <= c <= d - 1:
            return r * (d - 1) + (c - 1)
        return None

    edge_checks: list[tuple[int, ...]] = []
    h_id: dict[tuple[int, int], int] = {}
    for r in range(d):
        for c in range(d):
            h_id[(r, c)] = len(edge_checks)
            ends = [check_id(r, c), check_id(r, c + 1)]
            edge_checks.append(tuple(sorted(x for x in ends if x is not None)))
    for r in range(d - 1):
        for c in range(1, d):
            ends = [check_id(r, c), check_id(r + 1, c)]
            edge_checks.append(tuple(sorted(x for x in ends if x is not None)))

    # One logical bit; its dual representative runs down the left rough
    # column, horizontal edges (r, 0).
    logical = frozenset(h_id[(r, 0)] for r in range(d))
    return Lattice(kind="planar", size=d,
                   n_edges=d * d + (d - 1) * (d - 1),
                   n_checks=d * (d - 1), k=1,
                   edge_checks=tuple(edge_checks),
                   logical_edge_sets=(logical,))


def _toric(L: int) -> Lattice:
    def check_id(r: int, c: int) -> int:
        return (r % L) * L + (c % L)

    edge_checks: list[tuple[int, ...]] = []
    for r in range(L):
        for c in range(L):       # horizontal (r, c)-(r, c+1)
            pair = sorted((check_id(r, c), check_id(r, c + 1)))
            edge_checks.append(tuple(pair))
    for r in range(L):
        for c in range(L):       # vertical (r, c)-(r+1, c)
            pair = sorted((check_id(r, c), check_id(r + 1, c)))
            edge_checks.append(tuple(pair))

    # Two logical bits: a horizontal wrap line and a vertical wrap line.
    h_line = frozenset(r * L for r in range(L))            # ("h", r, 0)
    v_line = frozenset(L * L + c for c in range(L))        # ("v", 0, c)
    return Lattice(kind="toric", size=L, n_edges=2 * L * L,
                   n_checks=L * L, k=2,
                   edge_checks=tuple(edge_checks),
                   logical_edge_sets=(h_line, v_line))


def build_lattice(kind: str, size: int) -> Lattice:
    if size < 2:
        raise ValueError("lattice size must be >= 2")
    if kind == "planar":
        return _planar(size)
    if kind == "toric":
        return _toric(size)
    raise ValueError(f"unknown lattice kind {kind!r}")


def logical_bits(lat: Lattice, correction_edges: set[int]) -> tuple[int, ...]:
    """Overlap parity of a correction with each logical representative."""
    return tuple(len(correction_edges & line) & 1
                 for line in lat.logical_edge_sets)
