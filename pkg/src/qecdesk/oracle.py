"""Exact reference decoders for small instances.

Two independent routes for scoring the production decoder:

  mwpm_decode   exact minimum-weight perfect matching of the defects on
                the decoding graph, by dynamic programming over defect
                subsets.  The boundary terminates any defect on its own.
                Capped at 14 defects (subset table is 2^14).

  ml_decode     exhaustive maximum-likelihood class decision: enumerate
                every error pattern, keep those matching the syndrome,
                and accumulate exact per-class probabilities (Fraction
                arithmetic, no rounding).  Capped at 20 edges.

All tie-breaks are total orders so both routes are reproducible:
matching prefers the ascending partner and tries the boundary last,
accepting only strict improvements; the ML representative is the
minimum-(weight, value) pattern of the winning class.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2
from .decgraph import DecodingGraph, build_spacetime, shortest_distance
from .errors import InvalidParameter, UnsupportedSize
from .geometry import CodeSpec
from .noise import DetectionFrame

MAX_DEFECTS = 14
MAX_ML_EDGES = 20

BOUNDARY = -1   # partner id for defects matched to the boundary


@dataclass(frozen=True)
class MatchResult:
    correction: int                      # packed data-edge chain
    pairs: tuple[tuple[int, int], ...]   # (defect node, partner node|BOUNDARY)
    weight: float
    qweight: int


def _defect_nodes(frames: list[DetectionFrame], graph: DecodingGraph) -> list[int]:
    m = graph.code.m_x
    if len(frames) != graph.window:
        raise InvalidParameter("frame count does not match the window")
    nodes = []
    for slot, frame in enumerate(frames):
        if frame.bits >> m:
            raise InvalidParameter("frame bits exceed the check count")
        nodes.extend(slot * m + j for j in gf2.vec_to_indices(frame.bits))
    return nodes


def mwpm_decode(frames: list[DetectionFrame], code: CodeSpec,
                p_data: float, q_meas: float = 0.0,
                graph: DecodingGraph | None = None) -> MatchResult:
    """Exact minimum-weight matching over <= 14 defects."""
    if graph is None:
        graph = build_spacetime(code, len(frames), p_data, q_meas)
    defects = _defect_nodes(frames, graph)
    nd = len(defects)
    if nd > MAX_DEFECTS:
        raise UnsupportedSize(f"{nd} defects exceeds the exact-matching cap")

    has_boundary = bool(graph.adj[graph.boundary_node])
    if nd % 2 == 1 and not has_boundary:
        raise InvalidParameter("odd defect count with no boundary")

    # Pairwise and to-boundary shortest paths, exact in quantized units.
    INF = None
    paths: dict[tuple[int, int], object] = {}

    def path(a: int, b: int):
        key = (a, b) if a <= b else (b, a)
        if key not in paths:
            paths[key] = shortest_distance(graph, key[0], key[1])
        return paths[key]

    bnode = graph.boundary_node
    full = (1 << nd) - 1
    dp: list[int | None] = [None] * (1 << nd)
    choice: list[tuple[int, int] | None] = [None] * (1 << nd)
    dp[0] = 0
    for mask in range(1, 1 << nd):
        i = gf2.lowest_bit(mask)
        best = None
        pick = None
        rest_i = mask & ~(1 << i)
        # ascending partners first, boundary last; strict improvement only
        sub = rest_i
        while sub:
            j = gf2.lowest_bit(sub)
            sub &= sub - 1
            prev = dp[rest_i & ~(1 << j)]
            if prev is None:
                continue
            pr = path(defects[i], defects[j])
            if not pr.reachable:
                continue
            cost = prev + pr.qweight
            if best is None or cost < best:
                best, pick = cost, (i, j)
        if has_boundary:
            prev = dp[rest_i]
            pr = path(defects[i], bnode)
            if prev is not None and pr.reachable:
                cost = prev + pr.qweight
                if best is None or cost < best:
                    best, pick = cost, (i, BOUNDARY)
        dp[mask] = best
        choice[mask] = pick
    if dp[full] is None:
        raise InvalidParameter("defect set cannot be matched on this graph")

    correction = 0
    pairs = []
    mask = full
    while mask:
        i, j = choice[mask]
        if j == BOUNDARY:
            pr = path(defects[i], bnode)
            pairs.append((defects[i], BOUNDARY))
            mask &= ~(1 << i)
        else:
            pr = path(defects[i], defects[j])
            pairs.append((defects[i], defects[j]))
            mask &= ~((1 << i) | (1 << j))
        for e in pr.data_edges:
            correction ^= 1 << e
    qw = dp[full]
    return MatchResult(correction=correction, pairs=tuple(pairs),
                       weight=qw / (1 << 32), qweight=qw)


@dataclass(frozen=True)
class MlResult:
    best_label: tuple[int, ...]
    probs: dict                      # label tuple -> exact Fraction
    representative: int              # min-(weight, value) error of best class
    ambiguous: bool                  # top probability shared by >= 2 classes
    solutions: int                   # error patterns matching the syndrome


def _enumeration_table(code: CodeSpec):
    """Bit matrix of every length-n pattern, syndrome, label, weight."""
    n = code.n
    count = 1 << n
    vals = np.arange(count, dtype=np.uint32)
    raw = np.unpackbits(vals.view(np.uint8).reshape(count, 4),
                        axis=1, bitorder="little")[:, :n]
    hxt = np.zeros((n, code.m_x), dtype=np.uint8)
    for j, row in enumerate(code.h_x):
        for e in gf2.vec_to_indices(row):
            hxt[e, j] = 1
    lxt = np.zeros((n, code.k), dtype=np.uint8)
    for i, lx in enumerate(code.logical_x):
        for e in gf2.vec_to_indices(lx):
            lxt[e, i] = 1
    syn = (raw @ hxt) & 1
    lab = (raw @ lxt) & 1
    pow2 = (1 << np.arange(code.m_x, dtype=np.uint64)).astype(np.uint64)
    syn_packed = syn.astype(np.uint64) @ pow2
    weights = raw.sum(axis=1).astype(np.int64)
    return syn_packed, lab, weights


def ml_decode(code: CodeSpec, syndrome: int, p: float) -> MlResult:
    """Exhaustive ML class decision; exact probabilities via Fraction."""
    if code.n > MAX_ML_EDGES:
        raise UnsupportedSize(f"n={code.n} exceeds the enumeration cap")
    if not 0.0 < p < 0.5:
        raise InvalidParameter("p must lie in (0, 0.5) for a unique ML order")
    syn_packed, lab, weights = _enumeration_table(code)
    sel = np.nonzero(syn_packed == np.uint64(syndrome))[0]
    if sel.size == 0:
        raise InvalidParameter("syndrome is not in the image of the checks")

    x = Fraction(p) / (1 - Fraction(p))    # Fraction(float) is exact
    n = code.n
    probs: dict[tuple[int, ...], Fraction] = {}
    reps: dict[tuple[int, ...], tuple[int, int]] = {}
    labels_sel = lab[sel]
    weights_sel = weights[sel]
    packed_labels = labels_sel.astype(np.int64) @ (1 << np.arange(code.k))
    for lbl_packed in np.unique(packed_labels):
        mask = packed_labels == lbl_packed
        label = tuple(int((lbl_packed >> i) & 1) for i in range(code.k))
        hist = np.bincount(weights_sel[mask], minlength=n + 1)
        total = Fraction(0)
        for w, cnt in enumerate(hist):
            if cnt:
                total += int(cnt) * x ** w
        probs[label] = total
        idx = sel[mask]
        wmin = weights_sel[mask].min()
        cand = idx[weights_sel[mask] == wmin]
        reps[label] = (int(wmin), int(cand.min()))

    top = max(probs.values())
    winners = sorted(lbl for lbl, pr in probs.items() if pr == top)
    best = winners[0]
    return MlResult(best_label=best, probs=probs,
                    representative=reps[best][1],
                    ambiguous=len(winners) > 1,
                    solutions=int(sel.size))


def error_label(code: CodeSpec, error: int) -> tuple[int, ...]:
    """Class invariant of an error pattern: parity against each dual logical.

    Errors with equal syndrome fall in the same class exactly when the
    labels agree, because their difference is a cycle and trivial cycles
    pair to zero with every dual logical.
    """
    return tuple(gf2.parity(error & lx) for lx in code.logical_x)


def ml_agrees(code: CodeSpec, syndrome: int, p: float, correction: int) -> bool:
    """Does a correction land in the exhaustive-ML winning class?"""
    if gf2.matvec(code.h_x, correction) != syndrome:
        raise InvalidParameter("correction does not reproduce the syndrome")
    return error_label(code, correction) == ml_decode(code, syndrome, p).best_label
