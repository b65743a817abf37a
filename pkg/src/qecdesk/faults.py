"""Deterministic fault injection for packet streams.

The injector walks a stream of fixed-length packets and draws at most
one event per packet (single uniform draw against cumulative rates, so
runs are reproducible from the seed alone).  Priority when rates
overlap: drop, then burst, then flip.

  drop   remove the whole packet (downstream sees a clean seq gap)
  burst  xor a run of payload/CRC bytes with nonzero garbage; only the
         CRC guards that region, so the class maps to CORRUPT
  flip   xor one payload/CRC bit, likewise CRC-detectable
  shift  delete a single byte at a planned offset (framing slip; this
         is the desync class and is positioned explicitly, not drawn)

Flips and bursts deliberately avoid the header: damage to a validated
header field would surface as a framing reject (DESYNC) instead of a
CRC failure, blurring the class-to-flag mapping.

Every applied event is logged as one line `offset kind param` with
offsets in the coordinates of the original stream, so the expected
downstream flag counts are computable from the log:

  drop  -> seq-gap ERASURE for that round
  burst -> CORRUPT, packet lost, ERASURE on the gap
  flip  -> CORRUPT, packet lost, ERASURE on the gap
  shift -> DESYNC, packet lost, ERASURE on the gap
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .errors import InvalidParameter


@dataclass(frozen=True)
class FaultPlan:
    flip_rate: float = 0.0
    drop_rate: float = 0.0
    burst_rate: float = 0.0
    burst_min: int = 1
    burst_max: int = 8
    desync_shifts: tuple[int, ...] = ()
    seed: int = 0

    def __post_init__(self):
        for name in ("flip_rate", "drop_rate", "burst_rate"):
            r = getattr(self, name)
            if not 0.0 <= r <= 1.0:
                raise InvalidParameter(f"{name} must lie in [0, 1]")
        if self.flip_rate + self.drop_rate + self.burst_rate > 1.0:
            raise InvalidParameter("per-packet event rates sum above 1")
        if not 1 <= self.burst_min <= self.burst_max:
            raise InvalidParameter("burst length bounds are invalid")
        if any(o < 0 for o in self.desync_shifts):
            raise InvalidParameter("shift offsets must be nonnegative")


@dataclass(frozen=True)
class InjectionEvent:
    offset: int
    kind: str          # drop | burst | flip | shift
    param: int

    def line(self) -> str:
        return f"{self.offset} {self.kind} {self.param}"


def parse_log(lines) -> list[InjectionEvent]:
    events = []
    for ln in lines:
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        off, kind, param = ln.split()
        events.append(InjectionEvent(int(off), kind, int(param)))
    return events


def inject_faults(data: bytes, plan: FaultPlan,
                  packet_len: int) -> tuple[bytes, list[InjectionEvent]]:
    """Apply a plan to a stream of fixed-length packets.

    Zero rates and no shifts return the input unchanged.  Shift offsets
    that land inside a dropped packet are void and are not logged.
    """
    body = packet_len - 32         # payload + CRC, the CRC-only region
    if body < 1:
        raise InvalidParameter("packet too short to corrupt past the header")
    if plan.burst_rate and plan.burst_min > body:
        raise InvalidParameter("burst_min exceeds the corruptible region")
    if len(data) % packet_len:
        raise InvalidParameter("stream is not a whole number of packets")
    rng = random.Random(plan.seed)
    n_packets = len(data) // packet_len
    shifts = sorted(set(plan.desync_shifts))
    if shifts and shifts[-1] >= len(data):
        raise InvalidParameter("shift offset beyond the stream")

    out = bytearray()
    log: list[InjectionEvent] = []
    t_drop = plan.drop_rate
    t_burst = t_drop + plan.burst_rate
    t_flip = t_burst + plan.flip_rate
    for i in range(n_packets):
        start = i * packet_len
        chunk = bytearray(data[start:start + packet_len])
        u = rng.random()
        dropped = False
        if u < t_drop:
            dropped = True
            log.append(InjectionEvent(start, "drop", packet_len))
        elif u < t_burst:
            length = rng.randint(plan.burst_min, min(plan.burst_max, body))
            pos = rng.randrange(32, packet_len - length + 1)
            for j in range(length):
                chunk[pos + j] ^= rng.randrange(1, 256)
            log.append(InjectionEvent(start + pos, "burst", length))
        elif u < t_flip:
            bytepos = rng.randrange(32, packet_len)
            bit = rng.randrange(8)
            chunk[bytepos] ^= 1 << bit
            log.append(InjectionEvent(start + bytepos, "flip", bit))
        for off in shifts:
            if start <= off < start + packet_len:
                if dropped:
                    continue
                del chunk[off - start]
                log.append(InjectionEvent(off, "shift", 1))
        if not dropped:
            out.extend(chunk)
    log.sort(key=lambda ev: (ev.offset, ev.kind))
    return bytes(out), log


def affected_packets(log: list[InjectionEvent],
                     packet_len: int) -> dict[int, str]:
    """Packet index -> fault kind, for computing expected flags.

    A packet carries at most one sampled event plus possibly a shift;
    the strongest effect wins for expectation purposes (a shifted packet
    desyncs framing regardless of an earlier in-place corruption).
    """
    rank = {"flip": 1, "burst": 2, "drop": 3, "shift": 4}
    out: dict[int, str] = {}
    for ev in log:
        idx = ev.offset // packet_len
        if idx not in out or rank[ev.kind] > rank[out[idx]]:
            out[idx] = ev.kind
    return out
