"""
Packets on the wire: framing, checksums, resync
===============================================

Serialize syndrome rounds into framed packets, walk them back out with
the streaming parser, then flip a single byte and watch the parser
reject the frame, resynchronize, and keep honest books about it.
"""

from qecdesk import config, geometry, pipeline, wire

cfg = config.DecoderConfig(kind="planar", size=3, p_data=0.02, q_meas=0.0,
                           window=1, seed=404)
code = geometry.build_planar(3)
n_checks = len(code.h_x)
print(f"config id {cfg.cfg_id:016x}")

# build_stream samples a short run and returns the raw bytes exactly as
# a detector readout link would deliver them, plus the ground-truth
# error chain per round (hex, empty when nothing happened).
stream, truth = pipeline.build_stream(cfg, rounds=6)
payload = wire.payload_bytes_for(n_checks)
print(f"{len(stream)} bytes for 6 rounds "
      f"({len(stream) // 6} per packet: 32 header + {payload} payload + 4 crc)")

# The parser is fed arbitrary byte chunks and yields typed events.  On
# a clean stream that is one PacketEvent per round, in order.
parser = wire.FramingParser(cfg_id=cfg.cfg_id, payload_bytes=payload)
for ev in parser.feed(stream):
    pkt = ev.packet
    print(f"  offset {ev.offset:4d}  round {pkt.round_t}  seq {pkt.seq}  "
          f"syndrome {wire.unpack_syndrome(pkt.payload, n_checks):06b}")
print("counters:", parser.counters)

# Now damage the payload byte of the second packet (offset 37 + 32).
# The header still reads fine, so the parser knows which sequence
# number the frame claimed -- but the checksum catches the lie.  It
# reports a CorruptEvent with the claim, then hunts for the next magic
# marker and carries on with the remaining packets.
bad = bytearray(stream)
bad[37 + 32] ^= 0xFF
parser = wire.FramingParser(cfg_id=cfg.cfg_id, payload_bytes=payload)
events = parser.feed(bytes(bad))
for ev in events:
    if isinstance(ev, wire.CorruptEvent):
        print(f"\nCorruptEvent at offset {ev.offset}: {ev.reason}, "
              f"claimed seq {ev.claimed_seq} round {ev.claimed_round}")
ok = [ev for ev in events if isinstance(ev, wire.PacketEvent)]
print(f"{len(ok)} packets survived; counters: {parser.counters}")

# Damage the frame marker itself and the story changes: with no
# readable header there is nothing to attribute, so the span is
# reported as a desync and the whole packet is skipped byte by byte.
bad = bytearray(stream)
bad[37 + 3] ^= 0xFF
parser = wire.FramingParser(cfg_id=cfg.cfg_id, payload_bytes=payload)
events = parser.feed(bytes(bad))
kinds = [type(ev).__name__ for ev in events]
print(f"marker damage -> {kinds.count('PacketEvent')} packets, "
      f"{kinds.count('DesyncEvent')} desync span, "
      f"{parser.counters.bytes_skipped} bytes skipped")

# Garbage between frames is different from a damaged frame: the parser
# emits one DesyncEvent for the span, counts the skipped bytes, and
# resynchronizes on the next magic marker.
noisy = bytes(b ^ 0x55 for b in stream[:15]) + stream
parser = wire.FramingParser(cfg_id=cfg.cfg_id, payload_bytes=payload)
events = parser.feed(noisy)
for ev in events:
    if isinstance(ev, wire.DesyncEvent):
        print(f"\nDesyncEvent at offset {ev.offset}: {ev.reason}")
print(f"skipped {parser.counters.bytes_skipped} bytes, "
      f"{parser.counters.packets_ok} packets recovered")

# The host pipeline glues parser, queue, decoder, and bookkeeping into
# one call.  Feed it the clean stream and read the per-round records.
result = pipeline.run_stream(cfg, stream, expected_rounds=6)
print("\nhost records (round, flags, correction weight):")
for rec in result.records:
    print(f"  {rec.round_t}  {rec.flags:02x}  "
          f"{bin(rec.correction).count('1')}")
print("status:", result.status)
