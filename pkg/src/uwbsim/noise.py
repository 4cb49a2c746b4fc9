"""AWGN calibrated to an Eb/N0 (or per-pulse Ep/N0) operating point."""

import math
from dataclasses import dataclass

import numpy as np

from .waveform import Waveform

CONVENTIONS = ("eb", "ep")


@dataclass(frozen=True)
class NoiseSpec:
    """Noise level for unit bit energy.

    ``convention='eb'`` reads ``snr_db`` as Eb/N0. ``'ep'`` reads it as the
    per-pulse Ep/N0 with Ep = Eb/nf. Samples get variance N0*fs/2, the
    discrete stand-in for a two-sided PSD of N0/2.
    """

    snr_db: float
    fs: float = 20.0
    eb: float = 1.0
    convention: str = "eb"
    nf: int = 1

    def __post_init__(self):
        if self.convention not in CONVENTIONS:
            raise ValueError(f"unknown SNR convention {self.convention!r}")

    @property
    def noiseless(self):
        return math.isinf(self.snr_db) and self.snr_db > 0

    @property
    def n0(self):
        if self.noiseless:
            return 0.0
        ref = self.eb if self.convention == "eb" else self.eb / self.nf
        return ref * 10 ** (-self.snr_db / 10)

    @property
    def sigma(self):
        return math.sqrt(self.n0 * self.fs / 2)


def add_awgn(w: Waveform, spec: NoiseSpec, rng) -> Waveform:
    if abs(w.sample_period * spec.fs - 1.0) > 1e-9:
        raise ValueError(f"waveform sampled at {1 / w.sample_period}/ns but noise spec assumes {spec.fs}/ns")
    if spec.noiseless:
        return Waveform(w.samples.copy(), w.sample_period, w.t0)
    noise = rng.standard_normal(len(w.samples)) * spec.sigma
    return Waveform(w.samples + noise, w.sample_period, w.t0)
