"""Status flag bits shared by packets, detection frames, and records.

A record with flags == OK is a normal correction.  Anything else marks
degraded output; downstream consumers must treat the payload as suspect.
"""

from __future__ import annotations

OK = 0
ERASURE = 1 << 0    # round lost or invalid; correction deliberately empty
CORRUPT = 1 << 1    # integrity check failed on the source packet
DESYNC = 1 << 2     # framing lost; resynchronization in progress
STALE = 1 << 3      # finished past the staleness bound; do not apply
OVERFLOW = 1 << 4   # ingress queue dropped data
FATAL = 1 << 5      # decoder failed closed; no correction claimed

_NAMES = [
    (ERASURE, "ERASURE"),
    (CORRUPT, "CORRUPT"),
    (DESYNC, "DESYNC"),
    (STALE, "STALE"),
    (OVERFLOW, "OVERFLOW"),
    (FATAL, "FATAL"),
]

ALL = ERASURE | CORRUPT | DESYNC | STALE | OVERFLOW | FATAL


def describe(flags: int) -> str:
    """Human-readable flag list, 'OK' for zero."""
    if flags == 0:
        return "OK"
    parts = [name for bit, name in _NAMES if flags & bit]
    extra = flags & ~ALL
    if extra:
        parts.append(f"0x{extra:x}")
    return "|".join(parts)


def parse(text: str) -> int:
    """Inverse of describe for the names it emits."""
    if text == "OK":
        return 0
    value = 0
    table = {name: bit for bit, name in _NAMES}
    for part in text.split("|"):
        if part in table:
            value |= table[part]
        else:
            value |= int(part, 16)
    return value
