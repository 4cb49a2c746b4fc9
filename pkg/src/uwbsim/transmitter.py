"""Differentially encoded DS-UWB transmitter.

Frame ``j = m*Nf + i`` carries ``d_j = c_i * b_m * d_{j-1}``: the chip index is
the position inside the bit. Unrolling the recursion gives the closed form
``d_j = c'_i * b_m**i * a_m`` with ``c'_i = c_0 * ... * c_i`` and

    a_m = (c'_{Nf-1})**m * (b_0 * ... * b_{m-1})**Nf * d_{-1} * b_m

Each frame holds one pulse of energy 1/Nf at its start, so one bit carries
unit energy.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .pulses import Pulse
from .waveform import Waveform

# nominal data rate (Mbit/s) -> frames per bit, with Tf = 10 ns
RATE_TO_NF = {6: 16, 12: 8, 25: 4}
DEFAULT_TF = 10.0


@dataclass(frozen=True)
class SystemConfig:
    nf: int = 16
    tf: float = DEFAULT_TF  # frame duration, ns
    tw: float = 0.8  # pulse duration, ns
    tcorr: float = 5.8  # integration window per frame, ns
    fs: float = 20.0  # samples per ns
    d_init: int = 1

    def __post_init__(self):
        if int(self.nf) != self.nf or self.nf < 2 or self.nf % 2:
            raise ConfigError(f"Nf must be even and >= 2, got {self.nf}")
        if self.tf < 2 * self.tw:
            raise ConfigError(f"Tf must be at least 2*Tw (Tf={self.tf}, Tw={self.tw})")
        if not 0 < self.tcorr <= self.tf:
            raise ConfigError(f"Tcorr must lie in (0, Tf], got Tcorr={self.tcorr}, Tf={self.tf}")
        if self.tcorr < self.tw:
            raise ConfigError(f"Tcorr ({self.tcorr}) shorter than the pulse ({self.tw})")
        if self.d_init not in (-1, 1):
            raise ConfigError(f"d_init must be +1 or -1, got {self.d_init}")
        if abs(self.tf * self.fs - round(self.tf * self.fs)) > 1e-9:
            raise ConfigError(f"Tf*fs must be an integer sample count, got {self.tf * self.fs}")

    @classmethod
    def for_rate(cls, rate_mbps, **kw):
        try:
            nf = RATE_TO_NF[int(rate_mbps)]
        except (KeyError, ValueError):
            raise ConfigError(f"no frame mapping for {rate_mbps} Mbit/s; choose one of {sorted(RATE_TO_NF)}")
        return cls(nf=nf, **kw)

    @property
    def dt(self):
        return 1.0 / self.fs

    @property
    def frame_samples(self):
        return int(round(self.tf * self.fs))

    @property
    def window_samples(self):
        return int(round(self.tcorr * self.fs))

    @property
    def bit_rate_mbps(self):
        return 1e3 / (self.nf * self.tf)

    @property
    def max_channel_delay(self):
        """Channel truncation point, Tf/2."""
        return self.tf / 2


@dataclass(frozen=True)
class SpreadingCode:
    chips: np.ndarray
    derived: np.ndarray  # running product of the chips

    @classmethod
    def from_chips(cls, chips):
        c = np.asarray(chips, dtype=np.int64)
        if c.ndim != 1 or not np.all(np.abs(c) == 1):
            raise ConfigError("spreading chips must be a 1-D array of +1/-1")
        return cls(c, np.cumprod(c))

    @property
    def nf(self):
        return len(self.chips)


@dataclass(frozen=True)
class EncodedSequence:
    bits: np.ndarray
    d: np.ndarray
    a: np.ndarray
    d_init: int = 1


def generate_code(nf, rng) -> SpreadingCode:
    """Random equiprobable +-1 chips."""
    if int(nf) != nf or nf < 2 or nf % 2:
        raise ConfigError(f"Nf must be even and >= 2, got {nf}")
    return SpreadingCode.from_chips(rng.choice(np.array([-1, 1]), size=int(nf)))


def _as_bits(bits):
    b = np.asarray(bits, dtype=np.int64).ravel()
    if not np.all(np.abs(b) == 1):
        raise ConfigError("bits must be +1/-1")
    return b


def amplitude_factors(bits, code: SpreadingCode, d_init=1):
    """a_m for every bit, evaluated from the closed form rather than the recursion."""
    b = _as_bits(bits)
    nf = code.nf
    m = np.arange(len(b))
    head = np.where(m % 2, code.derived[-1], 1)
    prior = np.concatenate(([1], np.cumprod(b)[:-1])) if len(b) else b
    return head * prior**nf * d_init * b


def amplitude_factor(m, bits, code: SpreadingCode, d_init=1) -> int:
    b = _as_bits(bits)
    if not 0 <= m < len(b):
        raise IndexError(f"bit index {m} outside [0, {len(b)})")
    prior = int(np.prod(b[:m]))
    return int(code.derived[-1]) ** m * prior ** code.nf * d_init * int(b[m])


def closed_form_frames(bits, code: SpreadingCode, d_init=1):
    """d_{m*Nf+i} = c'_i * b_m**i * a_m."""
    b = _as_bits(bits)
    a = amplitude_factors(b, code, d_init)
    i = np.arange(code.nf)
    sign = np.where((b[:, None] == -1) & (i[None, :] % 2 == 1), -1, 1)
    return (code.derived[None, :] * sign * a[:, None]).ravel()


def differential_encode(bits, code: SpreadingCode, cfg: SystemConfig = None, d_init=None) -> EncodedSequence:
    if d_init is None:
        d_init = cfg.d_init if cfg is not None else 1
    b = _as_bits(bits)
    if cfg is not None and code.nf != cfg.nf:
        raise ConfigError(f"code length {code.nf} != Nf {cfg.nf}")
    steps = np.tile(code.chips, len(b)) * np.repeat(b, code.nf)
    d = d_init * np.cumprod(steps) if len(b) else np.zeros(0, dtype=np.int64)
    a = amplitude_factors(b, code, d_init)
    if __debug__:
        assert np.array_equal(d, closed_form_frames(b, code, d_init))
    return EncodedSequence(bits=b, d=d.astype(np.int64), a=a, d_init=d_init)


def synthesize(seq: EncodedSequence, pulse: Pulse, cfg: SystemConfig, reference_frame=False) -> Waveform:
    """s(t) = sum_j d_j w(t - j Tf) / sqrt(Nf).

    With ``reference_frame`` an extra frame carrying ``d_{-1}`` is placed before
    the burst (at t = -Tf), giving the differential receiver its first reference.
    """
    ns = cfg.frame_samples
    p = np.asarray(pulse.samples)
    if abs(pulse.sample_period - cfg.dt) > 1e-12:
        raise ConfigError(f"pulse sample period {pulse.sample_period} != 1/fs {cfg.dt}")
    if len(p) > ns:
        raise ConfigError(f"pulse ({len(p)} samples) longer than a frame ({ns} samples)")
    d = np.asarray(seq.d, dtype=float)
    if reference_frame:
        d = np.concatenate(([float(seq.d_init)], d))
    frames = np.zeros((len(d), ns))
    frames[:, : len(p)] = d[:, None] * p[None, :] / np.sqrt(cfg.nf)
    t0 = -cfg.tf if reference_frame else 0.0
    return Waveform(frames.ravel(), cfg.dt, t0)
