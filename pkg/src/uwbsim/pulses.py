"""Unit-energy transmit pulses: Gaussian monocycle, square, raised cosine."""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.optimize import brentq
from scipy.special import erf

from .errors import ConfigError

SHAPES = ("gaussian_monocycle", "square", "raised_cosine")

# fraction of monocycle energy that must fall inside [0, Tw]
MONOCYCLE_ENERGY_FRACTION = 0.999
DEFAULT_ROLLOFF = 0.6
DEFAULT_FS = 20.0


@dataclass(frozen=True)
class PulseSpec:
    """Pulse description. Times in ns, ``sample_rate`` in samples/ns."""

    shape: str = "raised_cosine"
    duration: float = 0.8
    rolloff: Optional[float] = None
    sample_rate: float = DEFAULT_FS

    def __post_init__(self):
        if self.shape not in SHAPES:
            raise ConfigError(f"unknown pulse shape {self.shape!r}; expected one of {SHAPES}")
        if self.shape == "raised_cosine" and self.rolloff is None:
            object.__setattr__(self, "rolloff", DEFAULT_ROLLOFF)
        self.validate()

    def validate(self):
        if not self.duration > 0:
            raise ConfigError(f"pulse duration must be positive, got {self.duration}")
        if not self.sample_rate > 0:
            raise ConfigError(f"sample rate must be positive, got {self.sample_rate}")
        if self.sample_rate * self.duration < 8 - 1e-9:
            raise ConfigError(
                f"need at least 8 samples across the pulse, got "
                f"{self.sample_rate * self.duration:g} (fs={self.sample_rate}, Tw={self.duration})"
            )
        if self.shape == "raised_cosine":
            if not 0.0 <= self.rolloff <= 1.0:
                raise ConfigError(f"rolloff must lie in [0, 1], got {self.rolloff}")
        elif self.rolloff is not None:
            raise ConfigError(f"rolloff only applies to raised_cosine, not {self.shape}")

    @property
    def n_samples(self):
        return int(round(self.duration * self.sample_rate))


@dataclass(frozen=True)
class Pulse:
    samples: np.ndarray
    sample_period: float
    spec: PulseSpec

    @property
    def times(self):
        return np.arange(len(self.samples)) * self.sample_period


@lru_cache(maxsize=None)
def monocycle_width(half_duration, fraction=MONOCYCLE_ENERGY_FRACTION):
    """Gaussian width sigma placing ``fraction`` of the monocycle energy in +-half_duration.

    The energy density of x*exp(-x**2/(2 s**2)) is x**2*exp(-x**2/s**2), whose
    mass inside |x| <= a is erf(u) - 2u*exp(-u**2)/sqrt(pi) with u = a/s.
    """

    def inside(u):
        return erf(u) - 2.0 * u * np.exp(-u * u) / np.sqrt(np.pi) - fraction

    u = brentq(inside, 1e-3, 50.0, xtol=1e-14)
    return half_duration / u


def gaussian_monocycle(t, duration):
    """First derivative of a Gaussian centred on ``duration/2`` (unnormalized)."""
    tc = duration / 2
    s = monocycle_width(tc)
    x = t - tc
    return -x / s**2 * np.exp(-(x**2) / (2 * s**2))


def raised_cosine(t, duration, rolloff):
    """Time-domain raised cosine centred on ``duration/2``.

    The symbol period is ``duration/2`` so the sinc main lobe spans exactly
    [0, duration]; the pulse is truncated there by the caller.
    """
    T = duration / 2
    x = (t - duration / 2) / T
    out = np.sinc(x)
    if rolloff > 0:
        den = 1.0 - (2.0 * rolloff * x) ** 2
        sing = np.isclose(den, 0.0, atol=1e-12)
        safe = np.where(sing, 1.0, den)
        out = out * np.cos(np.pi * rolloff * x) / safe
        if np.any(sing):
            out = np.where(sing, np.pi / 4 * np.sinc(1.0 / (2.0 * rolloff)), out)
    return out


def make_pulse(spec: PulseSpec) -> Pulse:
    """Sample the analytic pulse over [0, Tw] and renormalize to unit energy.

    Sample k holds the pulse value at the midpoint (k + 1/2) * dt of its
    interval, which keeps the grid symmetric about Tw/2.
    """
    spec.validate()
    dt = 1.0 / spec.sample_rate
    t = (np.arange(spec.n_samples) + 0.5) * dt
    if spec.shape == "square":
        s = np.ones_like(t)
    elif spec.shape == "gaussian_monocycle":
        s = gaussian_monocycle(t, spec.duration)
    else:
        s = raised_cosine(t, spec.duration, spec.rolloff)
    e = np.sum(s**2) * dt
    if not e > 0:
        raise ConfigError(f"pulse {spec} has zero energy on its sampling grid")
    return Pulse(samples=s / np.sqrt(e), sample_period=dt, spec=spec)


def pulse_energy(p) -> float:
    """Discrete energy sum(s_k**2) * dt."""
    return float(np.sum(np.asarray(p.samples) ** 2) * p.sample_period)
