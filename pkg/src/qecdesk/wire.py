"""Wire format: packet codec and the resynchronizing framing parser.

Layout (all multi-byte fields little-endian):

    offset  size  field
         0     4  magic, ASCII "QEC1"
         4     2  version (currently 1)
         6     2  hdr_bytes (currently 32)
         8     8  cfg_id
        16     4  round_t
        20     4  seq
        24     4  flags
        28     4  payload_bytes
        32     -  payload, check bits packed index -> byte -> bit, LSB first
         -     4  crc32 over bytes 4 .. end of payload

The CRC is the ubiquitous reflected IEEE variant (init and final xor
0xFFFFFFFF); its check value over b"123456789" is 0xCBF43926.

The parser is a byte-at-a-time state machine (HUNT / HEADER / BODY with
a latched error span).  Any reject, bad magic, bad header field, or bad
CRC, re-scans from one byte past the failed candidate start, so a
single spurious magic inside noise cannot hide a real packet boundary.
A packet event is emitted only after its CRC verifies: no output
without validated input.
"""

from __future__ import annotations

import struct
import zlib
from collections import deque
from dataclasses import dataclass

from .errors import InvalidParameter

MAGIC = b"QEC1"
VERSION = 1
HDR_BYTES = 32
CRC_BYTES = 4
MAX_PAYLOAD = 65535          # hard cap; larger lengths are framing noise
CRC_CHECK_VALUE = 0xCBF43926

_HDR = struct.Struct("<4sHHQIIII")
assert _HDR.size == HDR_BYTES


def crc32(data: bytes) -> int:
    return zlib.crc32(data) & 0xFFFFFFFF


def payload_bytes_for(m_x: int, w_slice: int = 1) -> int:
    if m_x < 1 or w_slice < 1:
        raise InvalidParameter("check count and slice must be positive")
    return (m_x * w_slice + 7) // 8


@dataclass(frozen=True)
class Packet:
    cfg_id: int
    round_t: int
    seq: int
    flags: int
    payload: bytes

    @property
    def wire_length(self) -> int:
        return HDR_BYTES + len(self.payload) + CRC_BYTES


def encode_packet(pkt: Packet) -> bytes:
    """Deterministic bytes; CRC covers header-after-magic plus payload."""
    if not 0 <= pkt.cfg_id < 1 << 64:
        raise InvalidParameter("cfg_id out of range")
    for name, value in (("round_t", pkt.round_t), ("seq", pkt.seq),
                        ("flags", pkt.flags)):
        if not 0 <= value < 1 << 32:
            raise InvalidParameter(f"{name} out of range")
    if len(pkt.payload) > MAX_PAYLOAD:
        raise InvalidParameter("payload exceeds the wire maximum")
    hdr = _HDR.pack(MAGIC, VERSION, HDR_BYTES, pkt.cfg_id, pkt.round_t,
                    pkt.seq, pkt.flags, len(pkt.payload))
    body = hdr + pkt.payload
    return body + struct.pack("<I", crc32(body[4:]))


def decode_packet(data: bytes, offset: int = 0) -> tuple[Packet, int]:
    """Strict single-packet decode; raises on any malformation."""
    if len(data) - offset < HDR_BYTES:
        raise InvalidParameter("short header")
    magic, version, hdr_bytes, cfg_id, round_t, seq, flags, nbytes = \
        _HDR.unpack_from(data, offset)
    if magic != MAGIC:
        raise InvalidParameter("bad magic")
    if version != VERSION:
        raise InvalidParameter("unsupported version")
    if hdr_bytes != HDR_BYTES:
        raise InvalidParameter("bad header length")
    if nbytes > MAX_PAYLOAD:
        raise InvalidParameter("payload exceeds the wire maximum")
    total = HDR_BYTES + nbytes + CRC_BYTES
    if len(data) - offset < total:
        raise InvalidParameter("short packet")
    body_end = offset + HDR_BYTES + nbytes
    want = struct.unpack_from("<I", data, body_end)[0]
    if crc32(data[offset + 4:body_end]) != want:
        raise InvalidParameter("crc mismatch")
    return Packet(cfg_id, round_t, seq, flags,
                  bytes(data[offset + HDR_BYTES:body_end])), total


# ---------------------------------------------------------------------------
# Streaming parser


@dataclass(frozen=True)
class PacketEvent:
    offset: int          # absolute stream offset of the packet start
    packet: Packet


@dataclass(frozen=True)
class CorruptEvent:
    offset: int
    reason: str = "crc mismatch"
    # Header fields of the failed frame.  The header passed structural
    # validation but the CRC did not, so these are attribution hints
    # (which round to blame), never decode inputs.
    claimed_seq: int = 0
    claimed_round: int = 0


@dataclass(frozen=True)
class DesyncEvent:
    offset: int
    reason: str
    fatal_candidate: bool = False


@dataclass
class ParserCounters:
    packets_ok: int = 0
    crc_fail: int = 0
    header_reject: int = 0
    desync_events: int = 0
    bytes_skipped: int = 0
    resyncs: int = 0


class FramingParser:
    """Fixed-frame-length parser bound to one active configuration.

    `step(byte)` follows the one-byte-in, at-most-one-event-out shape;
    `feed(data)` is the bulk form.  The internal buffer never holds more
    than one frame length of unresolved bytes, so memory is bounded and
    a resync lands within two packet lengths of any corruption point.
    """

    def __init__(self, cfg_id: int, payload_bytes: int):
        if payload_bytes < 0 or payload_bytes > MAX_PAYLOAD:
            raise InvalidParameter("payload size out of range")
        self.cfg_id = cfg_id
        self.payload_bytes = payload_bytes
        self.frame_len = HDR_BYTES + payload_bytes + CRC_BYTES
        self.counters = ParserCounters()
        self._buf = bytearray()
        self._base = 0            # absolute offset of _buf[0]
        self._in_error = False    # inside an unresolved error span
        self._step_queue: deque = deque()
        self.first_desync_offset: int | None = None
        self.last_packet_end = 0

    def step(self, byte: int) -> object | None:
        """One byte in, at most one event out (extras drain on later calls)."""
        self._step_queue.extend(self.feed(bytes((byte,))))
        return self._step_queue.popleft() if self._step_queue else None

    def feed(self, data: bytes) -> list[object]:
        self._buf.extend(data)
        events: list[object] = []
        buf = self._buf
        pos = 0
        while True:
            idx = buf.find(MAGIC, pos)
            if idx < 0:
                # keep a partial-magic tail, discard the rest
                keep = min(len(buf) - pos, len(MAGIC) - 1)
                skip = len(buf) - pos - keep
                if skip:
                    self._note_skip(events, self._base + pos, skip)
                pos = len(buf) - keep
                break
            if idx > pos:
                self._note_skip(events, self._base + pos, idx - pos)
                pos = idx
            if len(buf) - pos < HDR_BYTES:
                break
            (magic, version, hdr_bytes, cfg_id, round_t, seq, flags,
             nbytes) = _HDR.unpack_from(buf, pos)
            reason = None
            fatal = False
            if version != VERSION:
                reason = "unsupported version"
            elif hdr_bytes != HDR_BYTES:
                reason = "bad header length"
            elif nbytes > MAX_PAYLOAD:
                reason = "oversize frame"
                fatal = True
            elif nbytes != self.payload_bytes:
                reason = "payload length mismatch"
            elif cfg_id != self.cfg_id:
                reason = "foreign cfg_id"
            if reason is not None:
                self.counters.header_reject += 1
                if not self._in_error:
                    self.counters.desync_events += 1
                    events.append(DesyncEvent(self._base + pos, reason, fatal))
                    self._mark_desync(self._base + pos)
                self._in_error = True
                pos += 1
                continue
            total = HDR_BYTES + nbytes + CRC_BYTES
            if len(buf) - pos < total:
                break
            body_end = pos + HDR_BYTES + nbytes
            want = struct.unpack_from("<I", buf, body_end)[0]
            if crc32(bytes(buf[pos + 4:body_end])) != want:
                self.counters.crc_fail += 1
                # a structurally valid header identifies the frame even
                # inside an error span, so the claim is always emitted
                events.append(CorruptEvent(self._base + pos,
                                           claimed_seq=seq,
                                           claimed_round=round_t))
                self._mark_desync(self._base + pos)
                self._in_error = True
                pos += 1
                continue
            pkt = Packet(cfg_id, round_t, seq, flags,
                         bytes(buf[pos + HDR_BYTES:body_end]))
            events.append(PacketEvent(self._base + pos, pkt))
            self.counters.packets_ok += 1
            if self._in_error:
                self.counters.resyncs += 1
                self._in_error = False
            pos += total
            self.last_packet_end = self._base + pos
        del buf[:pos]
        self._base += pos
        return events

    def _note_skip(self, events: list[object], offset: int, skipped: int) -> None:
        self.counters.bytes_skipped += skipped
        if not self._in_error:
            self.counters.desync_events += 1
            events.append(DesyncEvent(offset, "bad magic"))
            self._mark_desync(offset)
            self._in_error = True

    def _mark_desync(self, offset: int) -> None:
        if self.first_desync_offset is None:
            self.first_desync_offset = offset


def pack_syndrome(bits: int, m_x: int) -> bytes:
    """Check bits to payload bytes, index -> byte -> bit, LSB first."""
    if bits >> m_x:
        raise InvalidParameter("syndrome bits exceed the check count")
    return bits.to_bytes(payload_bytes_for(m_x), "little")


def unpack_syndrome(payload: bytes, m_x: int) -> int:
    bits = int.from_bytes(payload, "little")
    if bits >> m_x:
        raise InvalidParameter("payload has bits beyond the check count")
    return bits
