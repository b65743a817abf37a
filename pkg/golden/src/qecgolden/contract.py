"""The conformance contract and the record-stream comparator.

The contract pins, in one versioned and hashed text, exactly what "the
two implementations agree" means: which record fields must match, what
latency allowance applies, which tie-break rule the decoders follow,
and what flag each fault class must produce.  Reports carry the
contract version and hash so a stored verdict can never be read against
the wrong ruleset.

Both record streams arrive as files; nothing is compared in process.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

from .recordfile import Record

CONTRACT_VERSION = 1

# Record fields that must match exactly, in reporting order.
MATCH_FIELDS = ("round_t", "flags", "logical", "correction", "a_t", "f_t")

# Stamps are modeled cycles, deterministic by construction, so the
# allowance is zero; wall-clock time is never serialized into records.
LATENCY_ALLOWANCE_CYCLES = 0

TIE_BREAK_RULE = (
    "uf-v1: union=rank-then-smaller-root(rank+1-on-tie); "
    "grow=edge-id-order,+1-per-active-endpoint,boundary-fills-at-1-else-2; "
    "merge=(min-root,max-root,edge-id)-ascending,one-union-per-root-per-sweep,"
    "losers-deferred; "
    "peel=preorder-dfs,(node,edge-id)-ascending,root=boundary-else-min-node,"
    "keep-edge-iff-child-parity-odd")

FAULT_POLICY = (
    ("seq gap", "ERASURE", "empty correction at each missing round"),
    ("crc failure", "CORRUPT", "empty correction at the claimed round"),
    ("framing desync", "DESYNC", "no OK record inside the error span"),
    ("ingress queue drop", "OVERFLOW", "empty correction at the lost round"),
    ("finish past staleness", "STALE", "correction suppressed"),
    ("budget or parity failure", "FATAL", "empty correction, fail closed"),
)


def contract_text() -> str:
    lines = [f"conformance-contract v{CONTRACT_VERSION}"]
    lines.append("match fields: " + ", ".join(MATCH_FIELDS))
    lines.append(f"latency allowance: {LATENCY_ALLOWANCE_CYCLES} cycles "
                 "(modeled stamps; wall clock never serialized)")
    lines.append("tie-break: " + TIE_BREAK_RULE)
    for cause, flag, action in FAULT_POLICY:
        lines.append(f"fault: {cause} -> {flag} -> {action}")
    return "\n".join(lines) + "\n"


def contract_hash() -> str:
    return hashlib.sha256(contract_text().encode()).hexdigest()[:12]


def contract_tag() -> str:
    return f"v{CONTRACT_VERSION}/{contract_hash()}"


# -- comparison ----------------------------------------------------------


@dataclass
class CompareResult:
    ok: bool
    records_compared: int
    detail: list            # human-readable lines; empty when ok
    first_divergent_round: int | None = None


def _field(rec: Record, name: str):
    return getattr(rec, name)


def _render(rec: Record) -> str:
    logical = "".join(str(b) for b in rec.logical)
    return (f"round={rec.round_t} flags={rec.flags:02x} logical={logical} "
            f"correction={rec.correction:x} a={rec.a_t} f={rec.f_t}")


def compare_streams(primary_head: tuple, primary: list,
                    golden_head: tuple, golden: list) -> CompareResult:
    """Field-by-field comparison of two parsed record streams.

    `*_head` is (cfg_id, n, k).  Records are compared positionally;
    a length mismatch is itself a divergence, reported with a desync
    analysis note since losing records is what a desync looks like
    downstream.
    """
    detail: list = []
    if primary_head != golden_head:
        pc, pn, pk = primary_head
        gc, gn, gk = golden_head
        detail.append("header mismatch: "
                      f"primary cfg={pc:016x} n={pn} k={pk} / "
                      f"reference cfg={gc:016x} n={gn} k={gk}")
        return CompareResult(False, 0, detail)

    for i, (p, g) in enumerate(zip(primary, golden)):
        for name in MATCH_FIELDS:
            pv, gv = _field(p, name), _field(g, name)
            if pv != gv:
                round_note = (f"round {p.round_t}" if p.round_t == g.round_t
                              else f"record index {i} (round mismatch)")
                detail.append(f"first divergence at {round_note}: "
                              f"field {name}: primary={pv!r} reference={gv!r}")
                detail.append("  primary:   " + _render(p))
                detail.append("  reference: " + _render(g))
                for back in range(max(0, i - 2), i):
                    detail.append(f"  context[-{i - back}]: "
                                  + _render(primary[back]))
                first = p.round_t if p.round_t == g.round_t else None
                return CompareResult(False, i, detail, first)

    if len(primary) != len(golden):
        i = min(len(primary), len(golden))
        shorter = "primary" if len(primary) < len(golden) else "reference"
        longer_list = golden if shorter == "primary" else primary
        detail.append(
            f"stream length mismatch: primary={len(primary)} "
            f"reference={len(golden)}; {shorter} ends at record index {i}")
        detail.append(
            "  desync analysis: a silently shortened stream is what a "
            "framing desync looks like downstream; first unmatched round "
            f"is {longer_list[i].round_t}")
        return CompareResult(False, i, detail,
                             first_divergent_round=longer_list[i].round_t)

    return CompareResult(True, len(primary), [])
