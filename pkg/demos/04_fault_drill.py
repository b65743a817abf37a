"""
Fault drill: drops, flips, bursts, and the flags they leave behind
==================================================================

Run the same recorded stream through the host four times -- once clean,
then under three kinds of deliberate damage -- and compare the flag
ledger each run leaves in its records.  Every round must be accounted
for no matter what happened to its packet.
"""

from qecdesk import config, faults, flags, pipeline

ROUNDS = 200
cfg = config.DecoderConfig(kind="planar", size=3, p_data=0.01, q_meas=0.0,
                           window=1, seed=31337)
stream, _ = pipeline.build_stream(cfg, ROUNDS)
packet_len = len(stream) // ROUNDS


def drill(name, plan):
    """Inject one fault family, replay, and summarize the records."""
    if plan is None:
        damaged, log = stream, []
    else:
        damaged, log = faults.inject_faults(stream, plan, packet_len)
    result = pipeline.run_stream(cfg, damaged, expected_rounds=ROUNDS)
    counts = {k: v for k, v in sorted(result.metrics.flag_counts.items())
              if v}
    assert len(result.records) == ROUNDS, "a round went missing"
    print(f"{name:10s} injected={len(log):3d}  {counts}")
    return result


# The clean baseline: every record flies the OK flag.
drill("clean", None)

# Drops: packets deleted in transit.  The host cannot see them, but the
# sequence numbers of later packets reveal the hole, and each missing
# round becomes an erasure record with a zero correction.
drill("drops", faults.FaultPlan(drop_rate=0.05, seed=1))

# Flips: single bytes damaged in transit.  Payload damage fails the
# checksum, so the round is erased AND tagged as a corruption, since
# the readable header told us which round was hit.  Damage that lands
# on a frame marker degrades into a desync span instead.
drill("flips", faults.FaultPlan(flip_rate=0.02, seed=2))

# Bursts: a run of garbage bytes inside one packet's guarded region,
# line noise rather than a clean hit.  The checksum covers the whole
# run, so the class is the same as a flip: CORRUPT plus an erasure.
drill("bursts", faults.FaultPlan(burst_rate=0.02, burst_min=2,
                                 burst_max=6, seed=3))

# Shifts: delete one byte mid-stream so every later frame starts at the
# wrong offset.  The parser loses the frame boundary, reports a desync
# span, and resynchronizes on the next intact marker.
result = drill("shift", faults.FaultPlan(desync_shifts=(packet_len * 50 + 7,)))
desynced = [rec.round_t for rec in result.records
            if rec.flags & flags.DESYNC]
print(f"           desync flag lands on round(s) {desynced}")

# Proof of the accounting: replay the drop run again and check that the
# record stream is dense from 0 to ROUNDS-1 even though 5% of the input
# never arrived.
damaged, log = faults.inject_faults(
    stream, faults.FaultPlan(drop_rate=0.05, seed=1), packet_len)
result = pipeline.run_stream(cfg, damaged, expected_rounds=ROUNDS)
rounds = [rec.round_t for rec in result.records]
assert rounds == list(range(ROUNDS))
erased = [rec.round_t for rec in result.records
          if rec.flags & flags.ERASURE]
print(f"\ndropped rounds (first 12): {erased[:12]}")
print("records stay dense: rounds 0 ..", rounds[-1])

# The injection log pins every event to a byte offset, so any replay
# disagreement can be traced to the exact packet that was touched.
damaged, log = faults.inject_faults(
    stream, faults.FaultPlan(drop_rate=0.03, seed=9), packet_len)
by_packet = faults.affected_packets(log, packet_len)
first = sorted(by_packet)[:5]
print("\nfirst injected packets:", {i: by_packet[i] for i in first})

# One more way to lose a round, and this one is self-inflicted: packets
# that arrive faster than the decoder drains its queue.  Push the clean
# stream in 16-packet bursts at a queue of depth 4 and the excess is
# dropped at the door -- flagged OVERFLOW so nobody mistakes it for
# line damage.
# (The queue depth is part of the config identity, so the stream is
# regenerated under the small-queue config rather than reused.)
small = config.DecoderConfig(kind="planar", size=3, p_data=0.01,
                             q_meas=0.0, window=1, seed=31337,
                             fifo_depth=4)
small_stream, _ = pipeline.build_stream(small, ROUNDS)
result = pipeline.run_stream(small, small_stream, expected_rounds=ROUNDS,
                             burst_packets=16)
lost = [rec.round_t for rec in result.records
        if rec.flags & flags.OVERFLOW]
print(f"\nburst arrivals vs depth-4 queue: {len(lost)} rounds dropped "
      f"at the queue, {result.counters['fifo_dropped']} counted by the "
      f"queue itself")
assert len(result.records) == ROUNDS
