"""Offline replay: a captured stream in, a full record stream out.

This is the reference statement of the host-side policies that the
record format implies:

  detection events   each received readout is XORed against the last
                     good readout, so across a loss gap the surviving
                     baseline absorbs the missing rounds' changes
  gaps               a jump of g in seq emits exactly g ERASURE records
                     with round numbers counted back from the packet
                     that revealed the gap; a record in the gap also
                     carries CORRUPT iff a CRC-failed frame claimed its
                     seq, and any desync context seen since the last
                     good packet
  duplicates         a seq at or below the last accepted one is counted
                     and never decoded; its fault context is re-armed
                     for the next accepted packet
  windows            every `window` received frames decode together;
                     the record's round is the last frame's round
  stamps             arrival a = round * t_cycle; finish f chains as
                     max(a, previous f) plus the decode's modeled
                     cycles (erasures decode nothing: f = max(a, f_prev))
  staleness          f - a beyond the bound flags STALE and suppresses
                     the correction
  tail               with an expected round count, missing rounds at
                     the stream end become trailing ERASURE records

The replay is strictly in-order and unbounded: the production ingress
queue cannot drop during file replay (bursts never exceed its depth),
so a dropped-packet OVERFLOW record here would rightly surface as a
conformance divergence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import flagbits as fb
from .cluster import WindowDecoder, WindowGraph, modeled_cycles
from .configfile import GoldenConfig
from .framing import (CorruptFrame, DesyncNote, GoodFrame, payload_bytes_for,
                      scan_stream)
from .lattice import build_lattice
from .recordfile import Record, edges_to_packed


@dataclass
class ReplayCounters:
    packets: int = 0
    erasures: int = 0
    corrupt_claims: int = 0
    dup_or_reorder: int = 0
    rounds_accounted: int = 0
    flag_counts: dict = field(default_factory=dict)


class Replay:
    def __init__(self, cfg: GoldenConfig):
        self.cfg = cfg
        self.lattice = build_lattice(cfg.kind, cfg.size)
        self.graph = WindowGraph(self.lattice, cfg.window)
        self.decoder = WindowDecoder(self.graph, cfg.effective_r_max(),
                                     cfg.effective_p_max())
        self.records: list[Record] = []
        self.counters = ReplayCounters()
        self._expected_seq = 0
        self._last_round = -1
        self._last_good_syndrome = 0
        self._finish_prev = 0
        self._window_frames: list = []
        self._desync_pending = False
        self._claimed_seqs: set = set()

    # -- record emission ---------------------------------------------------

    def _count_flags(self, flags: int) -> None:
        if flags == 0:
            name_hits = ["OK"]
        else:
            name_hits = [name for bit, name in fb.NAMES if flags & bit]
        for name in name_hits:
            self.counters.flag_counts[name] = \
                self.counters.flag_counts.get(name, 0) + 1

    def _emit_erasure(self, seq: int, round_t: int, context: int) -> None:
        a_t = round_t * self.cfg.t_cycle
        f_t = max(a_t, self._finish_prev)
        self._finish_prev = f_t
        flags = fb.ERASURE | context
        if seq in self._claimed_seqs:
            flags |= fb.CORRUPT
            self._claimed_seqs.discard(seq)
        self.records.append(Record(
            round_t=round_t, flags=flags,
            logical=(0,) * self.lattice.k, correction=0, a_t=a_t, f_t=f_t))
        self.counters.erasures += 1
        self.counters.rounds_accounted += 1
        self._count_flags(flags)

    def _decode_pending_window(self) -> None:
        frames = self._window_frames
        self._window_frames = []
        if len(frames) == self.graph.window:
            graph, decoder = self.graph, self.decoder
        else:
            # stream ended mid-window: decode the short tail as-is
            graph = WindowGraph(self.lattice, len(frames))
            decoder = WindowDecoder(graph, self.cfg.effective_r_max(),
                                    self.cfg.effective_p_max())
        out = decoder.decode(frames)
        self.counters.rounds_accounted += len(frames)
        a_t = out.round_t * self.cfg.t_cycle
        f_t = max(a_t, self._finish_prev) + modeled_cycles(graph, out)
        self._finish_prev = f_t
        flags = out.flags
        correction = edges_to_packed(out.correction_edges)
        logical = out.logical
        if f_t - a_t > self.cfg.staleness:
            flags |= fb.STALE
            correction = 0
            logical = (0,) * self.lattice.k
        self.records.append(Record(
            round_t=out.round_t, flags=flags, logical=logical,
            correction=correction, a_t=a_t, f_t=f_t))
        self._count_flags(flags)

    # -- stream walk ---------------------------------------------------------

    def _take_context(self) -> int:
        context = fb.DESYNC if self._desync_pending else fb.OK
        self._desync_pending = False
        return context

    def _accept(self, frame: GoodFrame) -> None:
        context = self._take_context()
        if frame.seq < self._expected_seq:
            self.counters.dup_or_reorder += 1
            # the context must outlive the discarded packet
            self._desync_pending = bool(context & fb.DESYNC)
            return
        for missing in range(self._expected_seq, frame.seq):
            round_t = frame.round_t - (frame.seq - missing)
            self._emit_erasure(missing, round_t, context)
        self._expected_seq = frame.seq + 1

        events = frame.syndrome ^ self._last_good_syndrome
        self._last_good_syndrome = frame.syndrome
        self._last_round = frame.round_t
        self._window_frames.append((frame.round_t, events, frame.flags))
        self.counters.packets += 1
        if len(self._window_frames) >= self.cfg.window:
            self._decode_pending_window()

    def _inferred_round(self, seq: int) -> int:
        if self._last_round < 0:
            return seq
        return self._last_round + (seq - (self._expected_seq - 1))

    def run(self, stream: bytes, expected_rounds: int | None = None) -> list:
        payload_bytes = payload_bytes_for(self.lattice.n_checks)
        for event in scan_stream(stream, self.cfg.cfg_id, payload_bytes):
            if isinstance(event, GoodFrame):
                self._accept(event)
            elif isinstance(event, CorruptFrame):
                self._claimed_seqs.add(event.claimed_seq)
                self.counters.corrupt_claims += 1
            elif isinstance(event, DesyncNote):
                self._desync_pending = True
        if self._window_frames:
            self._decode_pending_window()
        if expected_rounds is not None:
            while self._expected_seq < expected_rounds:
                seq = self._expected_seq
                round_t = self._inferred_round(seq)
                self._emit_erasure(seq, round_t, self._take_context())
                self._expected_seq += 1
        return self.records


def decode_stream(cfg: GoldenConfig, stream: bytes,
                  expected_rounds: int | None = None) -> Replay:
    replay = Replay(cfg)
    replay.run(stream, expected_rounds)
    return replay
