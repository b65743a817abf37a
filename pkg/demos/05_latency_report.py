"""
Latency accounting: percentiles, backlog, and static budgets
============================================================

Decoding has to keep up with the machine producing syndromes, not just
get the right answer eventually.  Replay a stream, read the latency
ledger the host kept while decoding, and check the headroom math that
says whether a configuration can run forever without falling behind.
"""

from qecdesk import config, metrics, pipeline

cfg = config.DecoderConfig(kind="planar", size=5, p_data=0.02, q_meas=0.005,
                           window=2, seed=808, t_cycle=1000, deadline=2000)
stream, _ = pipeline.build_stream(cfg, rounds=500)
result = pipeline.run_stream(cfg, stream, expected_rounds=500)
m = result.metrics

# Each record carries two timestamps in cycle units: a_t, when the
# round's data became available, and f_t, when its correction was
# finished.  The whole report derives from those pairs.
print(f"rounds {m.n_rounds}  mean latency {m.mean:.1f} cycles")
print(f"p50/p99/p99.9/max: {m.p50} / {m.p99} / {m.p999} / {m.l_max}")
print(f"deadline {m.deadline}: {m.deadline_misses} misses")

# Jitter comes in two flavors: spread around the mean, and
# round-to-round wobble.
print(f"jitter: |dev| {m.j_abs:.2f}, successive-diff {m.j_diff:.2f}")

# The backlog trace answers "is the decoder falling behind?": each
# round adds its processing time and retires one cycle interval.  A
# bounded sawtooth is healthy; a ramp means the machine outruns us.
# At this clock the decoder never accumulates work at all:
print(f"backlog peak {max(m.backlog)}, final {m.backlog[-1]}")

# Replay the same latencies against hypothetical faster clocks.  The
# offline trace is defined to match what the host would have recorded
# online, so this is a legitimate what-if.
lat = [s.f_t - s.a_t for s in
       (metrics.LatencySample(r.round_t, r.a_t, r.f_t)
        for r in result.records)]
for t_cyc in (40, 25, 15):
    trace = metrics.backlog_trace(lat, t_cycle=t_cyc)
    shape = "bounded" if trace[-1] <= max(lat) else "RAMPING"
    print(f"  t_cycle={t_cyc}: backlog peak {max(trace)}, "
          f"final {trace[-1]} ({shape})")

# The same numbers render as a line-oriented report for log scrapers.
text = metrics.report(m, cfg_lines={"kind": cfg.kind, "size": cfg.size,
                                    "window": cfg.window,
                                    "cfg_id": f"{cfg.cfg_id:016x}"})
head = "\n".join(text.splitlines()[:8])
print("\n--- report head ---")
print(head)

# Static budgets, no replay needed.  worst_case_cycles bounds a decode
# by pass count, detector count, and per-update cost; if even the bound
# beats the deadline, the tail can never miss.
n_detectors = 4 * 5 * 2          # planar-5, two-round window
bound = metrics.worst_case_cycles(p=12, n=n_detectors, r=5, c_upd=2)
print(f"\nworst-case decode bound: {bound} cycles "
      f"({'fits' if bound <= cfg.deadline else 'exceeds'} "
      f"the {cfg.deadline}-cycle deadline)")

# bandwidth_budget turns a decode shape into memory traffic: bytes per
# node update, bytes per whole decode, and the sustained rate the
# memory system must deliver to finish inside the deadline.
per_update, per_decode, rate = metrics.bandwidth_budget(
    b_bits=64, reads=3, writes=2, p=12, n=n_detectors,
    deadline_s=cfg.deadline * 1e-9)
print(f"memory traffic: {per_update} B/update, {per_decode} B/decode, "
      f"{rate / 1e9:.1f} GB/s sustained to meet the deadline")
