"""Record status bits, as published: anything nonzero means degraded."""

OK = 0
ERASURE = 1 << 0    # round lost or invalid; correction deliberately empty
CORRUPT = 1 << 1    # integrity check failed on the source packet
DESYNC = 1 << 2     # framing lost; resynchronization in progress
STALE = 1 << 3      # finished past the staleness bound; do not apply
OVERFLOW = 1 << 4   # ingress queue dropped data
FATAL = 1 << 5      # decoder failed closed; no correction claimed

NAMES = (
    (ERASURE, "ERASURE"),
    (CORRUPT, "CORRUPT"),
    (DESYNC, "DESYNC"),
    (STALE, "STALE"),
    (OVERFLOW, "OVERFLOW"),
    (FATAL, "FATAL"),
)


def describe(flags: int) -> str:
    if flags == 0:
        return "OK"
    return "|".join(name for bit, name in NAMES if flags & bit)
