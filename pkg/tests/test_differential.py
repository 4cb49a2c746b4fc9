import numpy as np
import pytest

from uwbsim import differential
from uwbsim.channel import CM1, ChannelRealization, apply_channel, draw_channel
from uwbsim.errors import FramingError
from uwbsim.pulses import pulse_energy
from uwbsim.transmitter import SpreadingCode, SystemConfig, differential_encode, generate_code, synthesize
from uwbsim.waveform import Waveform


def received(bits, code, cfg, pulse, ch=None):
    w = synthesize(differential_encode(bits, code, cfg), pulse, cfg, reference_frame=True)
    return apply_channel(w, ch) if ch is not None else w


def test_single_bit_statistic(rc_pulse):
    cfg = SystemConfig(nf=2)
    code = SpreadingCode.from_chips([1, 1])
    y = differential.correlate_frames(received([1], code, cfg, rc_pulse), cfg)
    stat = float(y.y @ code.chips)
    # per-frame energy 1/Nf, Nf terms of sign b_m
    assert stat == pytest.approx(1.0, abs=1e-12)
    assert differential.despread_decide(y, code).tolist() == [1]


def test_zero_waveform(cfg2):
    r = Waveform(np.zeros(3 * cfg2.frame_samples), cfg2.dt, -cfg2.tf)
    y = differential.correlate_frames(r, cfg2)
    assert np.all(y.y == 0)


def test_repeated_frame(rng, cfg2):
    frame = rng.standard_normal(cfg2.frame_samples)
    r = Waveform(np.tile(frame, 3), cfg2.dt, -cfg2.tf)
    y = differential.correlate_frames(r, cfg2)
    e = np.sum(frame[: cfg2.window_samples] ** 2) * cfg2.dt
    np.testing.assert_allclose(y.y, e)
    assert np.all(y.y > 0)


def test_despread_examples():
    code = SpreadingCode.from_chips([1, -1, -1, 1])
    assert differential.despread_decide(code.chips.astype(float), code).tolist() == [1]
    assert differential.despread_decide(np.zeros(4), code).tolist() == [1]
    assert differential.despread_decide(-code.chips.astype(float), code).tolist() == [-1]
    with pytest.raises(ValueError):
        differential.despread_decide(np.zeros(5), code)


def test_noiseless_pattern_matches_chips(rng, rc_pulse):
    cfg = SystemConfig(nf=8)
    code = generate_code(8, rng)
    bits = rng.choice([-1, 1], size=20)
    y = differential.correlate_frames(received(bits, code, cfg, rc_pulse), cfg).y.reshape(20, 8)
    # y_j proportional to d_j d_{j-1} = c_i b_m
    np.testing.assert_allclose(y, code.chips[None, :] * bits[:, None] / 8, atol=1e-12)


def test_desired_signal_identity(rng, rc_pulse):
    cfg = SystemConfig(nf=16)
    code = generate_code(16, rng)
    bits = rng.choice([-1, 1], size=10)
    y = differential.correlate_frames(received(bits, code, cfg, rc_pulse), cfg).y
    stat = y.reshape(10, 16) @ code.chips
    np.testing.assert_allclose(stat, bits * pulse_energy(rc_pulse), atol=1e-6)


def test_noiseless_cm1_round_trip(rng, rc_pulse):
    cfg = SystemConfig(nf=8)
    for _ in range(20):
        ch = draw_channel(CM1, cfg.max_channel_delay, cfg.dt, rng)
        code = generate_code(8, rng)
        bits = rng.choice([-1, 1], size=50)
        dec = differential.decode_bits(received(bits, code, cfg, rc_pulse, ch), code, cfg)
        assert np.array_equal(dec, bits)


def test_scale_invariance(rng, rc_pulse):
    cfg = SystemConfig(nf=4)
    code = generate_code(4, rng)
    bits = rng.choice([-1, 1], size=30)
    r = received(bits, code, cfg, rc_pulse)
    r = Waveform(r.samples + 0.05 * rng.standard_normal(len(r)), r.sample_period, r.t0)
    base = differential.decode_bits(r, code, cfg)
    for k in (1e-3, 0.5, 7.0, 1e4):
        assert np.array_equal(differential.decode_bits(r.scaled(k), code, cfg), base)


def test_needs_reference_frame(rc_pulse, cfg2):
    w = synthesize(differential_encode([1], SpreadingCode.from_chips([1, 1]), cfg2), rc_pulse, cfg2)
    with pytest.raises(FramingError):
        differential.correlate_frames(w, cfg2, n_bits=1)
