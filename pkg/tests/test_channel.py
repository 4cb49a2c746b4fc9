import numpy as np
import pytest

from uwbsim.channel import (
    CM1, ChannelRealization, RawArrivals, SVParams, apply_channel, draw_channel,
    impulse_response, poisson_arrivals, sample_sv, to_tapped_delay_line, truncate_and_normalize,
)
from uwbsim.errors import ChannelDegenerateError, ConfigError
from uwbsim.waveform import Waveform

DT = 0.05


def raw(delays, gains):
    d = np.asarray(delays, dtype=float)
    return RawArrivals(np.zeros(len(d), int), np.zeros(len(d)), d, np.asarray(gains, dtype=float))


def test_params_validation():
    with pytest.raises(ConfigError):
        SVParams(0.0, 2.5, 7.1, 4.3, 3.4, 3.4)
    with pytest.raises(ConfigError):
        SVParams(0.02, 2.5, 7.1, -1.0, 3.4, 3.4)
    with pytest.raises(ConfigError):
        CM1.with_max_delay(0.0)


def test_first_tap_at_zero(rng):
    for _ in range(50):
        arr = sample_sv(CM1, rng)
        assert arr.delay.min() == 0.0
        assert np.all(arr.delay < CM1.max_delay)


def test_single_ray():
    ch = to_tapped_delay_line(raw([0.0], [0.7]), DT)
    assert ch.taps == [(0.0, 0.7)]


def test_sorted_taps():
    ch = to_tapped_delay_line(raw([3.0, 1.0], [0.5, 0.2]), DT)
    assert ch.taps == [(1.0, 0.2), (3.0, 0.5)]


def test_merge_on_sample_grid():
    # 1.00 and 1.01 ns round to the same 0.05 ns sample and merge
    ch = to_tapped_delay_line(raw([1.00, 1.01], [0.3, 0.4]), DT)
    assert len(ch) == 1 and ch.gains[0] == pytest.approx(0.7)
    # one sample apart stays distinct
    ch = to_tapped_delay_line(raw([1.00, 1.05], [0.3, 0.4]), DT)
    assert len(ch) == 2


def test_truncate_and_normalize():
    ch = truncate_and_normalize(ChannelRealization.from_taps([(0, 0.8), (2, 0.6)]), 5)
    np.testing.assert_allclose(ch.gains, [0.8, 0.6])
    ch = truncate_and_normalize(ChannelRealization.from_taps([(0, 1), (7, 1)]), 5)
    assert ch.taps == [(0.0, 1.0)]
    with pytest.raises(ChannelDegenerateError):
        truncate_and_normalize(ChannelRealization.from_taps([(6, 1)]), 5)
    with pytest.raises(ConfigError):
        truncate_and_normalize(ch, 0.0)


def test_realization_invariants(rng):
    for _ in range(300):
        ch = draw_channel(CM1, 5.0, DT, rng)
        assert np.all(np.diff(ch.delays) > 0)
        assert ch.delays[-1] < 5.0
        assert abs(ch.total_energy - 1.0) < 1e-9


def test_truncation_leaves_no_mass_beyond(rng):
    # wide arrival window, truncation applied afterwards
    params = CM1.with_max_delay(60.0)
    spread = np.array([draw_channel(params, 5.0, DT, rng).max_delay for _ in range(10_000)])
    assert np.all(spread < 5.0)


def test_identity_channel_bit_exact(rng):
    x = Waveform(rng.standard_normal(300), DT)
    y = apply_channel(x, ChannelRealization.from_taps([(0.0, 1.0)]))
    assert np.array_equal(x.samples, y.samples)


def test_pure_delay(rng):
    x = Waveform(rng.standard_normal(50), DT)
    y = apply_channel(x, ChannelRealization.from_taps([(2.0, 1.0)]))
    assert len(y) == 50 + 40
    assert np.array_equal(y.samples[40:], x.samples)
    assert not np.any(y.samples[:40])


def test_two_taps_on_impulse():
    x = np.zeros(100)
    x[0] = 1 / np.sqrt(DT)  # unit-energy discrete impulse
    ch = ChannelRealization.from_taps([(0.0, 0.6), (1.0, 0.8)])
    y = apply_channel(Waveform(x, DT), ch).samples
    # oracle: direct summation over taps
    ref = np.zeros(len(y))
    for d, g in ch.taps:
        k = int(round(d / DT))
        ref[k:k + len(x)] += g * x
    np.testing.assert_array_equal(y, ref)
    assert np.sum(y**2) * DT == pytest.approx(1.0)


def test_linearity(rng):
    ch = draw_channel(CM1, 5.0, DT, rng)
    w1, w2 = rng.standard_normal(400), rng.standard_normal(400)
    a, b = 1.7, -0.3
    lhs = apply_channel(Waveform(a * w1 + b * w2, DT), ch).samples
    rhs = a * apply_channel(Waveform(w1, DT), ch).samples + b * apply_channel(Waveform(w2, DT), ch).samples
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12 * np.abs(rhs).max())


def test_matches_numpy_convolution(rng):
    ch = draw_channel(CM1, 5.0, DT, rng)
    x = rng.standard_normal(200)
    np.testing.assert_allclose(
        apply_channel(Waveform(x, DT), ch).samples, np.convolve(x, impulse_response(ch, DT)), atol=1e-12
    )


def test_cluster_interarrival_mean(rng):
    # oracle: the sample mean of exponential gaps estimates 1/Lambda
    t = poisson_arrivals(CM1.cluster_rate, 100_001 / CM1.cluster_rate, rng)
    gaps = np.diff(t)
    assert len(gaps) > 90_000
    assert np.mean(gaps) == pytest.approx(1 / CM1.cluster_rate, rel=0.02)


def test_ray_power_decay_slope(rng):
    # one cluster per realization: cluster arrivals pushed beyond the window
    params = SVParams(1e-9, CM1.ray_rate, CM1.cluster_decay, CM1.ray_decay,
                      CM1.cluster_fading_db, CM1.ray_fading_db, max_delay=20.0)
    taus, powers = [], []
    while sum(len(p) for p in powers) < 100_000:
        arr = sample_sv(params, rng)
        taus.append(arr.ray_delay)
        powers.append(arr.gain**2)
    tau, pw = np.concatenate(taus), np.concatenate(powers)
    edges = np.arange(0, 20.0001, 1.0)
    idx = np.digitize(tau, edges) - 1
    centres, mean_pw = [], []
    for k in range(len(edges) - 1):
        sel = idx == k
        centres.append(np.mean(tau[sel]))
        mean_pw.append(np.mean(pw[sel]))
    slope = np.polyfit(centres, np.log(mean_pw), 1)[0]
    assert -1 / slope == pytest.approx(CM1.ray_decay, rel=0.05)
