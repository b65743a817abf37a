"""Byte-level formats: packets, the trace container, stream scanning.

Packet layout (little-endian):

    0   4  magic "QEC1"
    4   2  version = 1
    6   2  header length = 32
    8   8  cfg_id
    16  4  round
    20  4  seq
    24  4  flags
    28  4  payload byte count
    32  .  payload (check bits, LSB-first within each byte)
    .   4  CRC-32 over bytes 4 .. end of payload

A trace file is one ASCII header line `QECTRACE1 <nbytes>`, the
canonical configuration text (exactly nbytes), then raw packet bytes.

The scanner walks a complete captured stream and yields the same event
sequence an incremental parser would: validated packets, corrupt frames
(header plausible, CRC wrong) with their claimed seq/round as
attribution hints, and one desync note per contiguous error span.
After any reject it rescans from one byte past the failed candidate, so
a spurious magic inside noise cannot mask a real packet boundary.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .crc import crc32

MAGIC = b"QEC1"
VERSION = 1
HDR_BYTES = 32
CRC_BYTES = 4
MAX_PAYLOAD = 65535
TRACE_MAGIC = b"QECTRACE1"

_HEADER = struct.Struct("<4sHHQIIII")
assert _HEADER.size == HDR_BYTES


def payload_bytes_for(n_checks: int) -> int:
    return (n_checks + 7) // 8


@dataclass(frozen=True)
class GoodFrame:
    offset: int
    cfg_id: int
    round_t: int
    seq: int
    flags: int
    syndrome: int        # payload bits as one integer, check 0 = bit 0


@dataclass(frozen=True)
class CorruptFrame:
    offset: int
    claimed_seq: int
    claimed_round: int


@dataclass(frozen=True)
class DesyncNote:
    offset: int
    reason: str


def encode_packet(cfg_id: int, round_t: int, seq: int, flags: int,
                  payload: bytes) -> bytes:
    header = _HEADER.pack(MAGIC, VERSION, HDR_BYTES, cfg_id, round_t, seq,
                          flags, len(payload))
    body = header + payload
    return body + struct.pack("<I", crc32(body[4:]))


def scan_stream(data: bytes, cfg_id: int, payload_bytes: int) -> list:
    """All frame events in a captured stream, in order.

    Mirrors the published resynchronization semantics: a desync note is
    raised once at the start of each error span; CRC failures always
    surface their claimed header fields, even inside a span; a span
    ends only when a fully validated packet goes by.
    """
    events: list = []
    pos = 0
    in_error = False

    def note_desync(offset: int, reason: str):
        nonlocal in_error
        if not in_error:
            events.append(DesyncNote(offset, reason))
            in_error = True

    while True:
        idx = data.find(MAGIC, pos)
        if idx < 0:
            # trailing bytes with no magic; fewer than 4 could be a
            # packet cut off mid-magic, which is not itself an error
            if len(data) - pos > len(MAGIC) - 1:
                note_desync(pos, "bad magic")
            break
        if idx > pos:
            note_desync(pos, "bad magic")
            pos = idx
        if len(data) - pos < HDR_BYTES:
            break                          # truncated header at stream end
        (magic, version, hdr_bytes, got_cfg, round_t, seq, flags,
         nbytes) = _HEADER.unpack_from(data, pos)
        reason = None
        if version != VERSION:
            reason = "unsupported version"
        elif hdr_bytes != HDR_BYTES:
            reason = "bad header length"
        elif nbytes > MAX_PAYLOAD:
            reason = "oversize frame"
        elif nbytes != payload_bytes:
            reason = "payload length mismatch"
        elif got_cfg != cfg_id:
            reason = "foreign cfg_id"
        if reason is not None:
            note_desync(pos, reason)
            pos += 1
            continue
        total = HDR_BYTES + nbytes + CRC_BYTES
        if len(data) - pos < total:
            break                          # truncated packet at stream end
        body_end = pos + HDR_BYTES + nbytes
        want = struct.unpack_from("<I", data, body_end)[0]
        if crc32(data[pos + 4:body_end]) != want:
            events.append(CorruptFrame(pos, claimed_seq=seq,
                                       claimed_round=round_t))
            in_error = True
            pos += 1
            continue
        syndrome = int.from_bytes(data[pos + HDR_BYTES:body_end], "little")
        events.append(GoodFrame(pos, got_cfg, round_t, seq, flags, syndrome))
        in_error = False
        pos += total
    return events


# -- trace container ---------------------------------------------------------


def read_trace(path) -> tuple[str, bytes]:
    """(canonical config text, packet bytes) from a trace file."""
    with open(path, "rb") as fh:
        blob = fh.read()
    nl = blob.find(b"\n")
    head = blob[:nl].split() if nl >= 0 else []
    if len(head) != 2 or head[0] != TRACE_MAGIC:
        raise ValueError(f"not a trace file: {path}")
    nbytes = int(head[1])
    text = blob[nl + 1:nl + 1 + nbytes].decode()
    return text, blob[nl + 1 + nbytes:]


def write_trace(path, config_text: str, stream: bytes) -> None:
    encoded = config_text.encode()
    with open(path, "wb") as fh:
        fh.write(TRACE_MAGIC + b" " + str(len(encoded)).encode() + b"\n")
        fh.write(encoded)
        fh.write(stream)
