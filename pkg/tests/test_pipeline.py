"""End-to-end host pipeline: files, gaps, flags, conservation, threading."""

import pytest

from qecdesk import faults, flags, gf2, pipeline, wire
from qecdesk.errors import InvalidParameter
from _kit import make_cfg


def run(cfg, stream, rounds, **kw):
    return pipeline.run_stream(cfg, stream, expected_rounds=rounds, **kw)


# -- file formats -----------------------------------------------------------

def test_trace_file_round_trip(tmp_path, cfg3):
    stream, _ = pipeline.build_stream(cfg3, 50)
    path = tmp_path / "t.trace"
    pipeline.write_trace(path, cfg3, stream)
    cfg_text, data = pipeline.read_trace(path)
    assert data == stream
    assert cfg_text == cfg3.canonical_text()


def test_record_file_round_trip(tmp_path, cfg3):
    stream, _ = pipeline.build_stream(cfg3, 80)
    result = run(cfg3, stream, 80)
    path = tmp_path / "r.rec"
    code = cfg3.build_code()
    pipeline.write_records(path, cfg3.cfg_id, code, result.records)
    cfg_id, n, k, records = pipeline.read_records(path)
    assert cfg_id == cfg3.cfg_id
    assert (n, k) == (code.n, code.k)
    assert len(records) == len(result.records)
    for got, want in zip(records, result.records):
        assert (got.round_t, got.flags, got.correction, got.logical_delta,
                got.a_t, got.f_t) == (want.round_t, want.flags,
                                      want.correction, want.logical_delta,
                                      want.a_t, want.f_t)


def test_truth_sidecar_round_trip(tmp_path, cfg3):
    pipeline.gen_trace_file(cfg3, 30, tmp_path / "t.trace",
                            truth_path=tmp_path / "t.truth")
    truth = pipeline.read_truth(tmp_path / "t.truth")
    assert len(truth) == 30
    assert all(0 <= e < (1 << cfg3.build_code().n) for e in truth)


# -- clean streaming --------------------------------------------------------

def test_clean_stream_all_ok(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 200)
    result = run(cfg3, stream, 200)
    assert len(result.records) == 200
    assert all(r.flags == flags.OK for r in result.records)
    assert [r.round_t for r in result.records] == list(range(200))
    assert result.counters["rounds_accounted"] == 200
    assert result.counters["parser_packets_ok"] == 200


def test_records_satisfy_per_round_syndromes(cfg3):
    # with q=0 and W=1, each OK record reproduces that round's event bits
    stream, truth = pipeline.build_stream(cfg3, 100)
    result = run(cfg3, stream, 100)
    code = cfg3.build_code()
    rows = list(code.h_x)
    prev = 0
    cum = 0
    truth_vecs = [gf2.vec_from_indices(map(int, ln.split())) for ln in truth]
    for rec, new_err in zip(result.records, truth_vecs):
        cum ^= new_err
        syn = gf2.matvec(rows, cum)
        assert gf2.matvec(rows, rec.correction) == syn ^ prev
        prev = syn


def test_logical_failures_scored_against_truth(tmp_path):
    cfg = make_cfg(p_data=0.04, seed=3)
    stream, truth = pipeline.build_stream(cfg, 400)
    result = run(cfg, stream, 400)
    truth_vecs = [gf2.vec_from_indices(map(int, ln.split())) for ln in truth]
    fails = pipeline.score_against_truth(result.records, truth_vecs,
                                         cfg.build_code())
    assert 0 <= fails < 100     # ~4 percent noise on d=3 fails occasionally


def test_latency_clock_is_monotone_nondecreasing(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 150)
    result = run(cfg3, stream, 150)
    for rec in result.records:
        assert rec.a_t == rec.round_t * cfg3.t_cycle
        assert rec.f_t >= rec.a_t
    fs = [r.f_t for r in result.records]
    assert fs == sorted(fs)


# -- gaps, corruption, overflow ---------------------------------------------

def test_dropped_packet_becomes_erasure_record(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 60)
    plen = cfg3.packet_len()
    cut = stream[:20 * plen] + stream[21 * plen:]     # drop seq 20
    result = run(cfg3, cut, 60)
    assert len(result.records) == 60
    rec = result.records[20]
    assert rec.flags & flags.ERASURE
    assert rec.correction == 0 and rec.round_t == 20
    assert all(r.flags == flags.OK for i, r in enumerate(result.records)
               if i != 20)
    assert result.counters["rounds_accounted"] == 60


def test_multi_packet_gap_fills_every_round(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 50)
    plen = cfg3.packet_len()
    cut = stream[:10 * plen] + stream[14 * plen:]     # drop seqs 10..13
    result = run(cfg3, cut, 50)
    assert len(result.records) == 50
    for t in range(10, 14):
        assert result.records[t].flags & flags.ERASURE
        assert result.records[t].round_t == t


def test_event_baseline_carries_across_gaps():
    # a data error inside the gap still produces a consistent correction
    # at the next good round, because events diff against the last good
    # reported syndrome rather than the missing one
    cfg = make_cfg(p_data=0.05, seed=11)
    stream, truth = pipeline.build_stream(cfg, 120)
    plen = cfg.packet_len()
    cut = stream[:30 * plen] + stream[33 * plen:]
    result = run(cfg, cut, 120)
    truth_vecs = [gf2.vec_from_indices(map(int, ln.split())) for ln in truth]
    fails = pipeline.score_against_truth(result.records, truth_vecs,
                                         cfg.build_code())
    assert fails < 30


def test_corrupted_payload_claims_its_round(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 40)
    blob = bytearray(stream)
    plen = cfg3.packet_len()
    blob[12 * plen + 33] ^= 0x4                        # payload of seq 12
    result = run(cfg3, bytes(blob), 40)
    rec = result.records[12]
    assert rec.flags & flags.ERASURE and rec.flags & flags.CORRUPT
    assert sum(bool(r.flags & flags.CORRUPT) for r in result.records) == 1
    assert result.counters["parser_crc_fail"] == 1


def test_truncation_desync_is_fail_closed(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 80)
    plen = cfg3.packet_len()
    # chop the middle of seq 25: framing must resync by seq 26/27
    blob = stream[:25 * plen + 9] + stream[26 * plen:]
    result = run(cfg3, blob, 80)
    assert len(result.records) == 80
    assert result.records[25].flags & (flags.ERASURE | flags.DESYNC)
    assert result.records[25].correction == 0
    after = result.records[27:]
    assert all(r.flags == flags.OK for r in after)


def test_fifo_overflow_marks_lost_rounds():
    cfg = make_cfg(fifo_depth=4)
    stream, _ = pipeline.build_stream(cfg, 64)
    result = run(cfg, stream, 64, burst_packets=16)
    dropped = [r for r in result.records if r.flags & flags.OVERFLOW]
    assert dropped                                   # bursts beat the queue
    assert result.counters["fifo_dropped"] == len(dropped)
    assert all(r.flags & flags.ERASURE for r in dropped)
    assert result.counters["rounds_accounted"] == 64
    assert not result.metrics.sla_pass


def test_stale_records_suppress_corrections():
    cfg = make_cfg(staleness=0, p_data=0.05, seed=5)
    stream, _ = pipeline.build_stream(cfg, 60)
    result = run(cfg, stream, 60)
    stale = [r for r in result.records if r.flags & flags.STALE]
    assert stale
    assert all(r.correction == 0 for r in stale)


def test_missing_tail_emits_trailing_erasures(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 50)
    plen = cfg3.packet_len()
    result = run(cfg3, stream[:40 * plen], 50)
    assert len(result.records) == 50
    for t in range(40, 50):
        assert result.records[t].flags & flags.ERASURE
    assert result.counters["rounds_accounted"] == 50


def test_windowed_mode_accounts_rounds():
    cfg = make_cfg(window=2, q_meas=0.002)
    stream, _ = pipeline.build_stream(cfg, 100)
    result = run(cfg, stream, 100)
    assert len(result.records) == 50
    assert result.counters["rounds_accounted"] == 100
    assert [r.round_t for r in result.records] == list(range(1, 100, 2))


def test_faulted_stream_accounting(cfg3):
    stream, _ = pipeline.build_stream(cfg3, 500)
    plan = faults.FaultPlan(flip_rate=0.02, drop_rate=0.02, burst_rate=0.01,
                            burst_min=2, burst_max=4, seed=77)
    faulted, log = faults.inject_faults(stream, plan, cfg3.packet_len())
    expected = faults.affected_packets(log, cfg3.packet_len())
    result = run(cfg3, faulted, 500)
    assert len(result.records) == 500
    assert result.counters["rounds_accounted"] == 500
    for seq, kind in expected.items():
        rec = result.records[seq]
        assert rec.flags & flags.ERASURE, (seq, kind)
        if kind in ("flip", "burst"):
            assert rec.flags & flags.CORRUPT, (seq, kind)
    n_bad = sum(bool(r.flags) for r in result.records)
    assert n_bad == len(expected)


# -- determinism and threading ----------------------------------------------

def test_two_runs_are_byte_identical(tmp_path, cfg3):
    stream, _ = pipeline.build_stream(cfg3, 300)
    code = cfg3.build_code()
    paths = []
    for name in ("a.rec", "b.rec"):
        result = run(cfg3, stream, 300)
        p = tmp_path / name
        pipeline.write_records(p, cfg3.cfg_id, code, result.records)
        paths.append(p)
    assert pipeline.file_digest(paths[0]) == pipeline.file_digest(paths[1])


def test_threaded_run_equals_single_thread(tmp_path):
    cfg = make_cfg(p_data=0.03, seed=21)
    stream, _ = pipeline.build_stream(cfg, 400)
    code = cfg.build_code()
    single = run(cfg, stream, 400, single_thread=True)
    threaded = run(cfg, stream, 400, single_thread=False)
    pa, pb = tmp_path / "s.rec", tmp_path / "t.rec"
    pipeline.write_records(pa, cfg.cfg_id, code, single.records)
    pipeline.write_records(pb, cfg.cfg_id, code, threaded.records)
    assert pipeline.file_digest(pa) == pipeline.file_digest(pb)
    assert threaded.counters["fifo_dropped"] == 0


# -- host command surface -----------------------------------------------------

def test_host_command_lifecycle(cfg3):
    host = pipeline.Host()
    assert host.start()["status"] == pipeline.CMD_REJECTED
    assert host.set_cfg(cfg3)["cfg_id"] == cfg3.cfg_id
    assert host.start()["status"] == pipeline.CMD_OK
    assert host.set_cfg(cfg3)["status"] == pipeline.CMD_REJECTED
    assert host.start()["status"] == pipeline.CMD_REJECTED
    st = host.get_status()
    assert st["started"] and st["cfg_id"] == cfg3.cfg_id
    assert host.stop()["status"] == pipeline.CMD_OK
    assert host.push(b"x")["status"] == pipeline.CMD_REJECTED


def test_set_cfg_accepts_canonical_text(cfg3):
    host = pipeline.Host()
    assert host.set_cfg(cfg3.canonical_text())["cfg_id"] == cfg3.cfg_id


def test_wrong_cfg_id_packets_are_rejected(cfg3):
    other = make_cfg(seed=8)
    stream, _ = pipeline.build_stream(other, 20)
    result = run(cfg3, stream, None)
    assert not result.records or all(
        r.flags != flags.OK for r in result.records)
    assert result.counters["parser_packets_ok"] == 0


def test_push_requires_bytes(cfg3):
    host = pipeline.Host()
    host.set_cfg(cfg3)
    host.start()
    with pytest.raises(InvalidParameter):
        host.push("not bytes")
