"""End-to-end pipeline: host command API, stream drivers, file formats.

Data path:  bytes -> framing parser -> ingress FIFO -> window assembly
-> decoder -> egress records.  The parser and FIFO are owned by the
push side; window assembly and decoding run on the pull side; the FIFO
is the only channel between them, so the same code drives both the
single-threaded and the two-stage threaded modes.

Policies that downstream consumers rely on:

  seq gaps      a gap of g missing packets yields exactly g ERASURE
                records with inferred round numbers, carrying any
                CORRUPT/DESYNC context observed in the gap and OVERFLOW
                when the loss was the ingress queue's own drop.
  fail closed   no record between desync onset and resync carries OK
                flags; duplicates and reordered packets are counted and
                never decoded.
  staleness     a record finishing more than the staleness bound after
                its arrival stamp is flagged STALE and its correction
                is suppressed.
  determinism   stamps are simulated cycles (arrival = round * t_cycle,
                finish chained through the modeled decode cost), so
                record files are byte-stable for a given config + trace.

Detection events are differences of consecutively *received* check
readouts; across a gap the last good readout is the baseline.
"""

from __future__ import annotations

import hashlib
import threading
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from . import flags as fl
from . import gf2, metrics, noise, wire
from .config import DecoderConfig
from .errors import InvalidParameter
from .fifo import POP_OK, PUSH_OK, BoundedFifo
from .geometry import CodeSpec
from .noise import DetectionFrame
from .ufdecoder import CorrectionRecord, Limits, decode_window

TRACE_MAGIC = b"QECTRACE1"
RECORD_MAGIC = "QECREC1"


# ---------------------------------------------------------------------------
# Trace and record files


def write_trace(path, cfg: DecoderConfig, stream: bytes) -> None:
    text = cfg.canonical_text().encode()
    with open(path, "wb") as fh:
        fh.write(TRACE_MAGIC + b" %d\n" % len(text))
        fh.write(text)
        fh.write(stream)


def read_trace(path) -> tuple[str, bytes]:
    data = Path(path).read_bytes()
    nl = data.find(b"\n")
    head = data[:nl].split()
    if nl < 0 or len(head) != 2 or head[0] != TRACE_MAGIC:
        raise InvalidParameter(f"not a trace file: {path}")
    n = int(head[1])
    text = data[nl + 1:nl + 1 + n].decode()
    return text, data[nl + 1 + n:]


def records_header(cfg_id: int, n: int, k: int) -> str:
    return f"{RECORD_MAGIC} cfg={cfg_id:016x} n={n} k={k}\n"


def format_record(rec: CorrectionRecord, n: int, k: int) -> str:
    logical = "".join(str(b) for b in rec.logical_delta)
    corr = gf2.vec_to_bytes(rec.correction, (n + 7) // 8).hex()
    return (f"{rec.round_t} {rec.flags:02x} {logical} {corr} "
            f"{rec.a_t} {rec.f_t}\n")


def write_records(path, cfg_id: int, code: CodeSpec,
                  records: list[CorrectionRecord]) -> None:
    with open(path, "w") as fh:
        fh.write(records_header(cfg_id, code.n, code.k))
        for rec in records:
            fh.write(format_record(rec, code.n, code.k))


def read_records(path) -> tuple[int, int, int, list[CorrectionRecord]]:
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise InvalidParameter(f"empty record file: {path}")
    head = lines[0].split()
    if len(head) != 4 or head[0] != RECORD_MAGIC:
        raise InvalidParameter(f"not a record file: {path}")
    cfg_id = int(head[1].removeprefix("cfg="), 16)
    n = int(head[2].removeprefix("n="))
    k = int(head[3].removeprefix("k="))
    records = []
    for ln in lines[1:]:
        r, flags_hex, logical, corr, a_t, f_t = ln.split()
        records.append(CorrectionRecord(
            cfg_id=cfg_id, round_t=int(r), flags=int(flags_hex, 16),
            logical_delta=tuple(int(c) for c in logical),
            correction=gf2.vec_from_bytes(bytes.fromhex(corr)),
            a_t=int(a_t), f_t=int(f_t)))
    return cfg_id, n, k, records


def file_digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# ---------------------------------------------------------------------------
# Trace generation


def build_stream(cfg: DecoderConfig, rounds: int) -> tuple[bytes, list[str]]:
    """Packet stream plus the ground-truth sidecar lines (new errors/round)."""
    code = cfg.build_code()
    model = noise.NoiseModel(p_data=cfg.p_data, q_meas=cfg.q_meas,
                             seed=cfg.seed)
    _, hist = noise.gen_trace(code, model, rounds)
    cfg_id = cfg.cfg_id
    out = bytearray()
    truth = []
    for t in range(rounds):
        reported = hist.syndromes[t] ^ hist.meas_flips[t]
        pkt = wire.Packet(cfg_id, t, t, 0,
                          wire.pack_syndrome(reported, code.m_x))
        out.extend(wire.encode_packet(pkt))
        truth.append(" ".join(str(i) for i in
                              gf2.vec_to_indices(hist.new_errors[t])))
    return bytes(out), truth


def gen_trace_file(cfg: DecoderConfig, rounds: int, trace_path,
                   truth_path=None) -> None:
    stream, truth = build_stream(cfg, rounds)
    write_trace(trace_path, cfg, stream)
    if truth_path is not None:
        Path(truth_path).write_text("".join(ln + "\n" for ln in truth))


def read_truth(path) -> list[int]:
    out = []
    for ln in Path(path).read_text().splitlines():
        out.append(gf2.vec_from_indices(int(tok) for tok in ln.split()))
    return out


# ---------------------------------------------------------------------------
# Host

CMD_OK = "ok"
CMD_REJECTED = "rejected"


@dataclass
class _Ingress:
    """What crosses the FIFO: a parsed packet plus parse-time context."""
    packet: wire.Packet
    fault_flags: int      # CORRUPT/DESYNC observed since the previous packet


class Host:
    """Command-plane API: set_cfg / start / stop / push / pull / status."""

    def __init__(self):
        self.cfg: DecoderConfig | None = None
        self.code: CodeSpec | None = None
        self.limits: Limits | None = None
        self.started = False
        self._runtime_clear()

    def _runtime_clear(self):
        self.parser = None
        self.fifo = None
        self.egress: deque = deque()
        self.records: list[CorrectionRecord] = []
        self.samples: list[metrics.LatencySample] = []
        self.flag_counts: dict[str, int] = {}
        self.expected_seq = 0
        self.last_round = -1
        self.last_good_syndrome = 0
        self.f_prev = 0
        self.frames: list[DetectionFrame] = []
        self.pending_fault_flags = 0
        self.corrupt_claims: set[int] = set()
        self.overflow_seqs: set[int] = set()
        self.dup_or_reorder = 0
        self.rounds_accounted = 0    # decodes add their window span
        self.health = 0
        self.finished = False

    # -- commands ------------------------------------------------------

    def set_cfg(self, blob) -> dict:
        if self.started:
            return {"status": CMD_REJECTED, "reason": "stop before set_cfg"}
        cfg = blob if isinstance(blob, DecoderConfig) else None
        if cfg is None:
            from .config import parse_config
            cfg = parse_config(blob)
        self.cfg = cfg
        self.code = cfg.build_code()
        self.limits = Limits(cfg.effective_r_max(), cfg.effective_p_max())
        self._runtime_clear()
        return {"status": CMD_OK, "cfg_id": cfg.cfg_id}

    def start(self) -> dict:
        if self.cfg is None:
            return {"status": CMD_REJECTED, "reason": "set_cfg first"}
        if self.started:
            return {"status": CMD_REJECTED, "reason": "already started"}
        self._runtime_clear()
        self.parser = wire.FramingParser(self.cfg.cfg_id,
                                         self.cfg.payload_bytes())
        self.fifo = BoundedFifo(self.cfg.fifo_depth)
        self.started = True
        return {"status": CMD_OK}

    def stop(self) -> dict:
        if not self.started:
            return {"status": CMD_REJECTED, "reason": "not started"}
        self.started = False
        return {"status": CMD_OK}

    def reset(self) -> dict:
        self.started = False
        self._runtime_clear()
        return {"status": CMD_OK}

    def push(self, data: bytes, block: bool = False) -> dict:
        """Ingest raw bytes; parsed packets enter the ingress FIFO."""
        if not isinstance(data, (bytes, bytearray, memoryview)):
            raise InvalidParameter("push expects a bytes-like payload")
        if not self.started:
            return {"status": CMD_REJECTED, "reason": "not started"}
        accepted = 0
        dropped = 0
        for ev in self.parser.feed(data):
            if isinstance(ev, wire.PacketEvent):
                item = _Ingress(ev.packet, self.pending_fault_flags)
                self.pending_fault_flags = 0
                if self.fifo.push(item, block=block) == PUSH_OK:
                    accepted += 1
                else:
                    dropped += 1
                    self.overflow_seqs.add(ev.packet.seq)
                    # context must survive the drop
                    self.pending_fault_flags |= item.fault_flags
            elif isinstance(ev, wire.CorruptEvent):
                # blame lands on the claimed round, not the whole gap
                self.corrupt_claims.add(ev.claimed_seq)
            elif isinstance(ev, wire.DesyncEvent):
                self.pending_fault_flags |= fl.DESYNC
        return {"status": CMD_OK, "accepted": accepted, "dropped": dropped}

    def pull(self):
        """Next CorrectionRecord, or None when the egress side is empty."""
        while not self.egress:
            status, item = self.fifo.pop() if self.fifo else (None, None)
            if status != POP_OK:
                return None
            self._consume(item)
        return self.egress.popleft()

    def finish(self, expected_rounds: int | None = None) -> dict:
        """Drain everything; account for rounds lost at the stream tail."""
        while True:
            status, item = self.fifo.pop() if self.fifo else (None, None)
            if status != POP_OK:
                break
            self._consume(item)
        if self.frames:
            # stream ended mid-window: decode the short window as-is
            self._decode_frames()
        if expected_rounds is not None:
            while self.expected_seq < expected_rounds:
                seq = self.expected_seq
                round_t = self._infer_round(seq)
                self._emit_erasure(seq, round_t,
                                   self.pending_fault_flags)
                self.pending_fault_flags = 0
                self.expected_seq += 1
        self.finished = True
        return {"status": CMD_OK, "records": len(self.records)}

    def get_status(self) -> dict:
        return {
            "started": self.started,
            "cfg_id": self.cfg.cfg_id if self.cfg else None,
            "last_round": self.last_round,
            "next_seq": self.expected_seq,
            "fifo_occupancy": self.fifo.occupancy if self.fifo else 0,
            "egress_backlog": len(self.egress),
            "health_flags": self.health,
            "health": fl.describe(self.health),
        }

    def get_counters(self) -> dict:
        out = {"records_out": len(self.records),
               "rounds_accounted": self.rounds_accounted,
               "dup_or_reorder": self.dup_or_reorder}
        for name, val in (self.flag_counts or {}).items():
            out[f"flag_{name.lower()}"] = val
        if self.parser is not None:
            c = self.parser.counters
            out.update(parser_packets_ok=c.packets_ok,
                       parser_crc_fail=c.crc_fail,
                       parser_header_reject=c.header_reject,
                       parser_desync_events=c.desync_events,
                       parser_bytes_skipped=c.bytes_skipped,
                       parser_resyncs=c.resyncs)
        if self.fifo is not None:
            s = self.fifo.stats()
            out.update(fifo_pushed=s.pushed, fifo_popped=s.popped,
                       fifo_dropped=s.dropped, fifo_occupancy=s.occupancy,
                       fifo_high_water=s.high_water,
                       fifo_overflow=int(s.overflow))
        return out

    # -- decode stage (pull side) ---------------------------------------

    def _infer_round(self, seq: int) -> int:
        if self.last_round < 0:
            return seq
        return self.last_round + (seq - (self.expected_seq - 1))

    def _record_flags(self, rec_flags: int):
        self.health |= rec_flags
        if rec_flags == 0:
            self.flag_counts["OK"] = self.flag_counts.get("OK", 0) + 1
            return
        for bit, name in fl._NAMES:
            if rec_flags & bit:
                self.flag_counts[name] = self.flag_counts.get(name, 0) + 1

    def _emit(self, rec: CorrectionRecord):
        self.records.append(rec)
        self.egress.append(rec)
        self.samples.append(metrics.LatencySample(rec.round_t, rec.a_t,
                                                  rec.f_t))
        self._record_flags(rec.flags)

    def _emit_erasure(self, seq: int, round_t: int, extra_flags: int):
        a_t = round_t * self.cfg.t_cycle
        f_t = max(a_t, self.f_prev)
        self.f_prev = f_t
        flags = fl.ERASURE | extra_flags
        if seq in self.corrupt_claims:
            flags |= fl.CORRUPT
            self.corrupt_claims.discard(seq)
        if seq in self.overflow_seqs:
            flags |= fl.OVERFLOW
            self.overflow_seqs.discard(seq)
        self.rounds_accounted += 1
        self._emit(CorrectionRecord(
            cfg_id=self.cfg.cfg_id, round_t=round_t, correction=0,
            logical_delta=(0,) * self.code.k, flags=flags, a_t=a_t, f_t=f_t))

    def _decode_frames(self):
        rec = decode_window(self.frames, self.code, self.limits,
                            cfg_id=self.cfg.cfg_id)
        self.rounds_accounted += len(self.frames)
        self.frames = []
        a_t = rec.round_t * self.cfg.t_cycle
        f_t = max(a_t, self.f_prev) + rec.modeled_cycles
        self.f_prev = f_t
        rec.a_t = a_t
        rec.f_t = f_t
        if f_t - a_t > self.cfg.staleness:
            rec.flags |= fl.STALE
            rec.correction = 0
            rec.logical_delta = (0,) * self.code.k
        self._emit(rec)

    def _consume(self, item: _Ingress):
        pkt = item.packet
        fault = item.fault_flags
        gap = pkt.seq - self.expected_seq
        if gap < 0:
            self.dup_or_reorder += 1
            self.pending_fault_flags |= fault
            return
        for miss in range(self.expected_seq, pkt.seq):
            round_t = pkt.round_t - (pkt.seq - miss)
            self._emit_erasure(miss, round_t, fault)
        self.expected_seq = pkt.seq + 1

        syndrome = wire.unpack_syndrome(pkt.payload, self.code.m_x)
        events = syndrome ^ self.last_good_syndrome
        self.last_good_syndrome = syndrome
        self.last_round = pkt.round_t
        self.frames.append(DetectionFrame(round_t=pkt.round_t, bits=events,
                                          flags=pkt.flags))
        if len(self.frames) >= self.cfg.window:
            self._decode_frames()


# ---------------------------------------------------------------------------
# Drivers


@dataclass
class RunResult:
    records: list[CorrectionRecord]
    metrics: metrics.RunMetrics
    counters: dict
    status: dict


def run_stream(cfg: DecoderConfig, stream: bytes,
               expected_rounds: int | None = None,
               burst_packets: int | None = None,
               single_thread: bool = True) -> RunResult:
    """Drive a byte stream through a Host and collect everything.

    Delivery is in bursts of `burst_packets` frames (default: the FIFO
    depth, which a correctly sized queue absorbs without loss).  The
    single-threaded mode drains fully between bursts; the threaded mode
    runs a producer with blocking pushes against a consumer, which by
    construction yields the identical record stream.
    """
    host = Host()
    host.set_cfg(cfg)
    st = host.start()
    if st["status"] != CMD_OK:
        raise InvalidParameter(st.get("reason", "start failed"))
    chunk = (burst_packets or cfg.fifo_depth) * cfg.packet_len()

    if single_thread:
        for at in range(0, len(stream), chunk):
            host.push(stream[at:at + chunk])
            while host.pull() is not None:
                pass
    else:
        def produce():
            for at in range(0, len(stream), chunk):
                host.push(stream[at:at + chunk], block=True)

        producer = threading.Thread(target=produce)
        producer.start()
        while producer.is_alive():
            if host.pull() is None:
                # nothing ready; let the producer make progress
                producer.join(timeout=0.0005)
        producer.join()
        while host.pull() is not None:
            pass

    host.stop()
    host.finish(expected_rounds)
    host.fifo.check_conservation()
    counters = host.get_counters()
    if host.samples:
        run_metrics = metrics.collect(
            host.samples, t_cycle=cfg.t_cycle, deadline=cfg.deadline,
            flag_counts=host.flag_counts,
            fifo_high_water=counters.get("fifo_high_water", 0),
            overflow_dropped=counters.get("fifo_dropped", 0))
    else:
        run_metrics = None
    return RunResult(host.records, run_metrics, counters, host.get_status())


def score_against_truth(records: list[CorrectionRecord], truth: list[int],
                        code: CodeSpec) -> int:
    """Logical failure count for single-round windows against ground truth.

    Valid when each record corrects exactly one round's new errors
    (window 1, no measurement noise).  Rounds without a usable record
    (non-OK flags) accumulate their truth into the next comparison, the
    same way the decoder's event baseline carries across gaps.
    """
    failures = 0
    pending_truth = 0
    by_round = {rec.round_t: rec for rec in records}
    for t, new_err in enumerate(truth):
        pending_truth ^= new_err
        rec = by_round.get(t)
        if rec is None or rec.flags != fl.OK:
            continue
        residual = rec.correction ^ pending_truth
        pending_truth = 0
        if gf2.matvec(code.h_x, residual):
            failures += 1   # syndrome mismatch is itself a failure
            continue
        labels = tuple(gf2.parity(residual & lx) for lx in code.logical_x)
        if any(labels):
            failures += 1
    return failures
