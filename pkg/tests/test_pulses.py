import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from uwbsim.errors import ConfigError
from uwbsim.pulses import (
    Pulse, PulseSpec, gaussian_monocycle, make_pulse, monocycle_width, pulse_energy,
)


def test_square_is_unit_energy_rectangle():
    p = make_pulse(PulseSpec("square", 0.8, sample_rate=20.0))
    assert len(p.samples) == 16
    np.testing.assert_allclose(p.samples, 1 / np.sqrt(0.8), rtol=1e-12)
    assert p.times[-1] < 0.8


@pytest.mark.parametrize("shape", ["square", "gaussian_monocycle", "raised_cosine"])
def test_unit_energy(shape):
    assert abs(pulse_energy(make_pulse(PulseSpec(shape))) - 1.0) < 1e-9


def test_monocycle_zero_mean():
    # oracle: quadrature of the analytic monocycle over [0, Tw]
    tw = 0.8
    integral, _ = quad(lambda t: gaussian_monocycle(t, tw), 0, tw)
    scale = np.sqrt(quad(lambda t: gaussian_monocycle(t, tw) ** 2, 0, tw)[0])
    assert abs(integral / scale) < 1e-9
    p = make_pulse(PulseSpec("gaussian_monocycle", tw, sample_rate=20.0))
    assert abs(np.sum(p.samples) * p.sample_period) < 1e-3


def test_monocycle_energy_fraction():
    tw = 0.8
    inside = quad(lambda t: gaussian_monocycle(t, tw) ** 2, 0, tw)[0]
    total = quad(lambda t: gaussian_monocycle(t, tw) ** 2, -5, 5 + tw, limit=200)[0]
    assert inside / total == pytest.approx(0.999, abs=1e-6)
    assert monocycle_width(0.4) > 0


def test_pulse_energy_plumbing():
    spec = PulseSpec("square")
    assert pulse_energy(make_pulse(spec)) == pytest.approx(1.0)
    assert pulse_energy(Pulse(np.zeros(16), 0.05, spec)) == 0.0
    p = make_pulse(spec)
    assert pulse_energy(Pulse(2 * p.samples, p.sample_period, spec)) == pytest.approx(4.0)


@pytest.mark.parametrize("kwargs", [
    dict(shape="raised_cosine", rolloff=1.5),
    dict(shape="raised_cosine", rolloff=-0.1),
    dict(shape="square", duration=0.0),
    dict(shape="square", duration=-1.0),
    dict(shape="square", duration=0.8, sample_rate=5.0),
    dict(shape="square", rolloff=0.3),
    dict(shape="triangle"),
])
def test_bad_specs(kwargs):
    with pytest.raises(ConfigError):
        PulseSpec(**kwargs)


def test_rolloff_defaults_to_point_six():
    assert PulseSpec("raised_cosine").rolloff == 0.6
    assert PulseSpec("square").rolloff is None


@settings(max_examples=60, deadline=None)
@given(
    shape=st.sampled_from(["square", "gaussian_monocycle", "raised_cosine"]),
    tw=st.floats(0.4, 2.0),
    fs=st.floats(20.0, 80.0),
    rolloff=st.floats(0.0, 1.0),
)
def test_energy_invariant(shape, tw, fs, rolloff):
    spec = PulseSpec(shape, tw, rolloff if shape == "raised_cosine" else None, fs)
    p = make_pulse(spec)
    assert abs(pulse_energy(p) - 1.0) < 1e-9
    assert p.times[-1] < tw + 1e-12


@pytest.mark.parametrize("shape", ["gaussian_monocycle", "raised_cosine"])
def test_doubling_fs_is_stable(shape):
    tw = 0.8
    coarse = make_pulse(PulseSpec(shape, tw, sample_rate=20.0))
    fine = make_pulse(PulseSpec(shape, tw, sample_rate=40.0))
    assert abs(pulse_energy(coarse) - pulse_energy(fine)) < 1e-6
    # two fine samples straddle each coarse midpoint
    paired = fine.samples.reshape(-1, 2).mean(axis=1)
    np.testing.assert_allclose(paired, coarse.samples, atol=0.05 * np.abs(coarse.samples).max())


def test_raised_cosine_smooth_in_rolloff():
    peaks = []
    for a in np.round(np.arange(0.0, 1.0001, 0.1), 10):
        p = make_pulse(PulseSpec("raised_cosine", 0.8, float(a), 20.0))
        assert abs(pulse_energy(p) - 1.0) < 1e-9
        peaks.append(np.max(np.abs(p.samples)))
    peaks = np.array(peaks)
    assert np.all(np.abs(np.diff(peaks)) / peaks[:-1] < 0.05)


def test_raised_cosine_rolloff_zero_is_sinc():
    p = make_pulse(PulseSpec("raised_cosine", 0.8, 0.0, 20.0))
    t = p.times + p.sample_period / 2
    ref = np.sinc((t - 0.4) / 0.4)
    ref /= np.sqrt(np.sum(ref**2) * p.sample_period)
    np.testing.assert_allclose(p.samples, ref, atol=1e-12)
