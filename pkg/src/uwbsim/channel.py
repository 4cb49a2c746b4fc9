"""Saleh-Valenzuela multipath channel reduced to a tapped delay line.

Cluster arrivals are a Poisson process of rate ``cluster_rate``; rays within
each cluster arrive as a Poisson process of rate ``ray_rate``. The first
cluster and its first ray sit at delay 0. Mean ray power decays as
exp(-T/Gamma) * exp(-tau/gamma); amplitudes are log-normal with independent
cluster and ray fading terms and a uniformly random polarity.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import ChannelDegenerateError, ConfigError
from .waveform import Waveform


@dataclass(frozen=True)
class SVParams:
    cluster_rate: float  # Lambda, 1/ns
    ray_rate: float  # lambda, 1/ns
    cluster_decay: float  # Gamma, ns
    ray_decay: float  # gamma, ns
    cluster_fading_db: float
    ray_fading_db: float
    max_delay: float = 5.0  # arrivals at or beyond this delay are not generated, ns

    def __post_init__(self):
        for name in ("cluster_rate", "ray_rate", "cluster_decay", "ray_decay", "max_delay"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"S-V parameter {name} must be positive, got {getattr(self, name)}")
        for name in ("cluster_fading_db", "ray_fading_db"):
            if getattr(self, name) < 0:
                raise ConfigError(f"S-V parameter {name} must be non-negative")

    def with_max_delay(self, max_delay):
        return SVParams(
            self.cluster_rate, self.ray_rate, self.cluster_decay, self.ray_decay,
            self.cluster_fading_db, self.ray_fading_db, max_delay,
        )


# IEEE 802.15.3a channel models (LOS 0-4 m, NLOS 0-4 m, NLOS 4-10 m, extreme NLOS)
CM1 = SVParams(0.0233, 2.5, 7.1, 4.3, 3.3941, 3.3941)
CM2 = SVParams(0.4, 0.5, 5.5, 6.7, 3.3941, 3.3941)
CM3 = SVParams(0.0667, 2.1, 14.0, 7.9, 3.3941, 3.3941)
CM4 = SVParams(0.0667, 2.1, 24.0, 12.0, 3.3941, 3.3941)
MODELS = {"cm1": CM1, "cm2": CM2, "cm3": CM3, "cm4": CM4}


@dataclass(frozen=True)
class RawArrivals:
    """Flat view of the double sum: one entry per ray."""

    cluster: np.ndarray  # cluster index l
    cluster_time: np.ndarray  # T_l
    ray_delay: np.ndarray  # tau_{k,l}, relative to its cluster
    gain: np.ndarray  # alpha_{k,l}

    def __len__(self):
        return len(self.gain)

    @property
    def delay(self):
        return self.cluster_time + self.ray_delay


@dataclass(frozen=True)
class ChannelRealization:
    delays: np.ndarray  # ns, strictly increasing
    gains: np.ndarray

    @property
    def taps(self) -> List[Tuple[float, float]]:
        return list(zip(self.delays.tolist(), self.gains.tolist()))

    @property
    def total_energy(self):
        return float(np.sum(self.gains**2))

    @property
    def max_delay(self):
        return float(self.delays[-1]) if len(self.delays) else 0.0

    def __len__(self):
        return len(self.delays)

    @classmethod
    def from_taps(cls, taps):
        d, g = zip(*taps) if taps else ((), ())
        return cls(np.asarray(d, dtype=float), np.asarray(g, dtype=float))


def poisson_arrivals(rate, horizon, rng):
    """Arrival times of a Poisson process on [0, horizon), the first pinned at 0."""
    times = [0.0]
    # draw in blocks; expected count is rate * horizon
    block = max(16, int(rate * horizon * 1.2) + 16)
    t = 0.0
    while True:
        gaps = rng.exponential(1.0 / rate, size=block)
        cum = t + np.cumsum(gaps)
        keep = cum[cum < horizon]
        times.extend(keep.tolist())
        if len(keep) < block:
            return np.asarray(times)
        t = cum[-1]


def sample_sv(params: SVParams, rng) -> RawArrivals:
    """Draw one set of cluster/ray arrivals with delays below ``params.max_delay``."""
    cl_sigma = params.cluster_fading_db
    ray_sigma = params.ray_fading_db
    cluster_times = poisson_arrivals(params.cluster_rate, params.max_delay, rng)
    idx, T, tau, gains = [], [], [], []
    for l, Tl in enumerate(cluster_times):
        rays = poisson_arrivals(params.ray_rate, params.max_delay - Tl, rng)
        n = len(rays)
        mean_power = np.exp(-Tl / params.cluster_decay) * np.exp(-rays / params.ray_decay)
        # 20log10 amplitude ~ N(mu, s1^2 + s2^2); mu chosen so E[amp^2] = mean_power
        fade_db = rng.normal(0.0, cl_sigma) + rng.normal(0.0, ray_sigma, size=n)
        mu_db = 10 * np.log10(mean_power) - (cl_sigma**2 + ray_sigma**2) * np.log(10) / 20
        amp = 10 ** ((mu_db + fade_db) / 20)
        sign = rng.choice(np.array([-1.0, 1.0]), size=n)
        idx.append(np.full(n, l))
        T.append(np.full(n, Tl))
        tau.append(rays)
        gains.append(sign * amp)
    return RawArrivals(
        cluster=np.concatenate(idx),
        cluster_time=np.concatenate(T),
        ray_delay=np.concatenate(tau),
        gain=np.concatenate(gains),
    )


def to_tapped_delay_line(raw: RawArrivals, sample_period: float) -> ChannelRealization:
    """Quantize absolute delays to the sample grid and sum rays sharing a sample."""
    if len(raw) == 0:
        raise ChannelDegenerateError("empty arrival set")
    k = np.rint(raw.delay / sample_period).astype(np.int64)
    uniq, inv = np.unique(k, return_inverse=True)
    gains = np.zeros(len(uniq))
    np.add.at(gains, inv, raw.gain)
    # divide by the rate so grid delays print exactly (6 / 20.0 rather than 6 * 0.05)
    return ChannelRealization(uniq / (1.0 / sample_period), gains)


def truncate_and_normalize(ch: ChannelRealization, max_delay: float) -> ChannelRealization:
    """Drop taps at or beyond ``max_delay`` and rescale the rest to unit energy."""
    if not max_delay > 0:
        raise ConfigError(f"max_delay must be positive, got {max_delay}")
    keep = ch.delays < max_delay
    d, g = ch.delays[keep], ch.gains[keep]
    e = np.sum(g**2)
    if len(d) == 0 or e == 0:
        raise ChannelDegenerateError(f"no tap survives truncation at {max_delay} ns")
    return ChannelRealization(d, g / np.sqrt(e))


def draw_channel(params: SVParams, truncate_at: float, sample_period: float, rng) -> ChannelRealization:
    """Sample, flatten, truncate and normalize one realization."""
    raw = sample_sv(params, rng)
    return truncate_and_normalize(to_tapped_delay_line(raw, sample_period), truncate_at)


def tap_offsets(ch: ChannelRealization, sample_period: float):
    return np.rint(ch.delays / sample_period).astype(np.int64)


def impulse_response(ch: ChannelRealization, sample_period: float):
    """Sampled h[k]; taps sharing a sample are summed."""
    k = tap_offsets(ch, sample_period)
    h = np.zeros(int(k.max()) + 1 if len(k) else 1)
    np.add.at(h, k, ch.gains)
    return h


def apply_channel(w: Waveform, ch: ChannelRealization) -> Waveform:
    """out(t) = sum_l gain_l * in(t - delay_l); the output grows by the largest tap offset."""
    k = tap_offsets(ch, w.sample_period)
    n = len(w.samples)
    out = np.zeros(n + (int(k.max()) if len(k) else 0))
    for off, g in zip(k, ch.gains):
        out[off:off + n] += g * w.samples
    return Waveform(out, w.sample_period, w.t0)
