"""Correction record files.

Grammar (one header line, then one line per record):

    QECREC1 cfg=<16 hex> n=<data edges> k=<logical bits>
    <round> <flags as 2 hex> <k logical bits> <correction hex> <a> <f>

The correction field packs one bit per data edge, edge 0 in the lowest
bit of byte 0, ceil(n/8) bytes, rendered as lowercase hex.  `a` is the
modeled arrival stamp (round * t_cycle) and `f` the modeled finish
stamp, both in cycles.
"""

from __future__ import annotations

from dataclasses import dataclass

HEADER_MAGIC = "QECREC1"


@dataclass(frozen=True)
class Record:
    round_t: int
    flags: int
    logical: tuple          # k ints, 0 or 1
    correction: int         # packed over data edges
    a_t: int
    f_t: int


def edges_to_packed(edges: set) -> int:
    value = 0
    for e in edges:
        value |= 1 << e
    return value


def header_line(cfg_id: int, n: int, k: int) -> str:
    return f"{HEADER_MAGIC} cfg={cfg_id:016x} n={n} k={k}\n"


def record_line(rec: Record, n: int) -> str:
    logical = "".join(str(b) for b in rec.logical)
    corr = rec.correction.to_bytes((n + 7) // 8, "little").hex()
    return (f"{rec.round_t} {rec.flags:02x} {logical} {corr} "
            f"{rec.a_t} {rec.f_t}\n")


def write_records(path, cfg_id: int, n: int, k: int,
                  records: list) -> None:
    with open(path, "w") as fh:
        fh.write(header_line(cfg_id, n, k))
        for rec in records:
            fh.write(record_line(rec, n))


def read_records(path) -> tuple[int, int, int, list]:
    """(cfg_id, n, k, records); raises ValueError on malformed input."""
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"empty record file: {path}")
    head = lines[0].split()
    if len(head) != 4 or head[0] != HEADER_MAGIC:
        raise ValueError(f"not a record file: {path}")
    cfg_id = int(head[1].removeprefix("cfg="), 16)
    n = int(head[2].removeprefix("n="))
    k = int(head[3].removeprefix("k="))
    records = []
    for lineno, line in enumerate(lines[1:], 2):
        parts = line.split()
        if len(parts) != 6:
            raise ValueError(f"{path}:{lineno}: expected 6 fields")
        round_t, flags_hex, logical, corr_hex, a_t, f_t = parts
        records.append(Record(
            round_t=int(round_t), flags=int(flags_hex, 16),
            logical=tuple(int(c) for c in logical),
            correction=int.from_bytes(bytes.fromhex(corr_hex), "little"),
            a_t=int(a_t), f_t=int(f_t)))
    return cfg_id, n, k, records
