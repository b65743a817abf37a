"""Noise sampling: determinism, stream splitting, rates, event formation."""

import pytest

from qecdesk import geometry, gf2, noise
from qecdesk.errors import InvalidParameter


def test_model_validation():
    with pytest.raises(InvalidParameter):
        noise.NoiseModel(p_data=-0.1, q_meas=0.0, seed=0)
    with pytest.raises(InvalidParameter):
        noise.NoiseModel(p_data=0.0, q_meas=1.5, seed=0)
    with pytest.raises(InvalidParameter):
        noise.NoiseModel(p_data=0.0, q_meas=0.0, seed=1 << 64)


def test_zero_rates_mean_silence(planar3):
    model = noise.NoiseModel(p_data=0.0, q_meas=0.0, seed=3)
    frames, hist = noise.gen_trace(planar3, model, 50)
    assert all(f.bits == 0 for f in frames)
    assert all(e == 0 for e in hist.new_errors)


def test_certain_flip_hits_every_edge(planar3):
    model = noise.NoiseModel(p_data=1.0, q_meas=0.0, seed=3)
    _, hist = noise.gen_trace(planar3, model, 3)
    full = (1 << planar3.n) - 1
    assert all(e == full for e in hist.new_errors)


def test_fixed_seed_reproduces_history(planar3):
    model = noise.NoiseModel(p_data=0.05, q_meas=0.02, seed=11)
    f1, h1 = noise.gen_trace(planar3, model, 200)
    f2, h2 = noise.gen_trace(planar3, model, 200)
    assert [f.bits for f in f1] == [f.bits for f in f2]
    assert h1.new_errors == h2.new_errors
    assert h1.meas_flips == h2.meas_flips


def test_seeds_split_conditions(planar3):
    a = noise.gen_trace(planar3, noise.NoiseModel(0.05, 0.0, seed=1), 100)[1]
    b = noise.gen_trace(planar3, noise.NoiseModel(0.05, 0.0, seed=2), 100)[1]
    assert a.new_errors != b.new_errors


def test_batch_equals_incremental(planar3):
    model = noise.NoiseModel(p_data=0.08, q_meas=0.03, seed=21)
    frames, hist = noise.gen_trace(planar3, model, 60)
    sampler = noise.RoundSampler(planar3, model)
    rows = list(planar3.h_x)
    cum = 0
    prev_rep = 0
    for t in range(60):
        err, flips = sampler.sample_round()
        assert err == hist.new_errors[t]
        assert flips == hist.meas_flips[t]
        cum ^= err
        rep = gf2.matvec(rows, cum) ^ flips
        assert frames[t].bits == rep ^ prev_rep
        prev_rep = rep


def test_empirical_rate_near_nominal(planar3):
    model = noise.NoiseModel(p_data=0.1, q_meas=0.0, seed=5)
    _, hist = noise.gen_trace(planar3, model, 4000)
    flips = sum(gf2.weight(e) for e in hist.new_errors)
    trials = 4000 * planar3.n
    rate = flips / trials
    assert abs(rate - 0.1) < 0.01       # ~20 sigma at this sample size


def test_detection_events_is_xor():
    f = noise.detection_events(0b1011, 0b0110, 4, 7)
    assert f.bits == 0b1101
    assert f.round_t == 7
    assert noise.detection_events(0b101, 0b101, 3, 0).bits == 0


def test_measurement_flip_signature():
    # reported history (1, 0, 1) on one check: events at every round,
    # the middle flip showing as the consecutive pair at t=1, t=2
    history = [1, 0, 1]
    prev = 0
    events = []
    for t, s in enumerate(history):
        events.append(noise.detection_events(s, prev, 1, t).bits)
        prev = s
    assert events[1] == 1 and events[2] == 1


def test_single_data_error_fires_boundary_checks(planar3):
    # inject one edge between rounds with perfect measurement: the event
    # frame at that round equals the edge's vertex boundary, then silence
    for edge in range(planar3.n):
        want = geometry.boundary(planar3, 1 << edge)
        s_prev = 0
        s_now = gf2.matvec(list(planar3.h_x), 1 << edge)
        f = noise.detection_events(s_now, s_prev, planar3.m_x, 1)
        assert f.bits == want
        assert gf2.weight(want) in (1, 2)


def test_check_history_accepts_own_trace(planar3):
    model = noise.NoiseModel(p_data=0.06, q_meas=0.02, seed=9)
    _, hist = noise.gen_trace(planar3, model, 150)
    noise.check_history(planar3, hist)    # must not raise


def test_check_history_rejects_tampering(planar3):
    model = noise.NoiseModel(p_data=0.06, q_meas=0.0, seed=9)
    _, hist = noise.gen_trace(planar3, model, 50)
    hist.syndromes[10] ^= 1
    with pytest.raises(InvalidParameter):
        noise.check_history(planar3, hist)


def test_gen_trace_validates_arguments(planar3):
    model = noise.NoiseModel(p_data=0.01, q_meas=0.0, seed=1)
    with pytest.raises(InvalidParameter):
        noise.gen_trace(planar3, model, 0)
    with pytest.raises(InvalidParameter):
        noise.gen_trace(planar3, model, 10, window=0)
