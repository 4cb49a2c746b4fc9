"""Flat ``key = value`` run configuration.

Lines are ``key = value``; ``#`` starts a comment. Times are in ns, rates in
Mbit/s, SNR in dB, and key names carry their unit. List values are
comma-separated. Command-line overrides win over the file, and the file wins
over the defaults.
"""

import math
from dataclasses import dataclass, fields, replace
from typing import Optional, Tuple

from .channel import MODELS, SVParams
from .errors import ConfigError
from .harness import RECEIVERS, TrialPlan
from .noise import CONVENTIONS
from .pulses import SHAPES, PulseSpec
from .transmitter import RATE_TO_NF, SystemConfig


@dataclass(frozen=True)
class RunConfig:
    rate_mbps: Tuple[int, ...] = (6,)
    nf: Optional[int] = None
    tf_ns: float = 10.0
    tw_ns: float = 0.8
    tcorr_ns: Optional[float] = None  # default Tw + Tf/2
    max_delay_ns: Optional[float] = None  # channel truncation, default Tf/2
    fs_per_ns: float = 20.0
    d_init: int = 1
    pulse: Tuple[str, ...] = ("raised_cosine",)
    rolloff: float = 0.6
    model: str = "cm1"
    cluster_rate_per_ns: Optional[float] = None
    ray_rate_per_ns: Optional[float] = None
    cluster_decay_ns: Optional[float] = None
    ray_decay_ns: Optional[float] = None
    cluster_fading_db: Optional[float] = None
    ray_fading_db: Optional[float] = None
    snr_db: Tuple[float, ...] = (0.0, 4.0, 8.0, 12.0, 16.0, 20.0, 24.0)
    snr_convention: str = "eb"
    receivers: Tuple[str, ...] = RECEIVERS
    bits_per_burst: int = 1000
    min_errors: int = 200
    max_bits: int = 2_000_000
    seed: int = 0
    out: str = "ber.csv"
    figure: Optional[str] = None
    gnuplot_dir: Optional[str] = None
    debug_correlations: Optional[str] = None
    debug_spectrum: Optional[str] = None

    def __post_init__(self):
        self.validate()

    # derived values

    @property
    def tcorr(self):
        return self.tcorr_ns if self.tcorr_ns is not None else self.tw_ns + self.tf_ns / 2

    @property
    def truncation(self):
        return self.max_delay_ns if self.max_delay_ns is not None else self.tf_ns / 2

    def nf_for(self, rate):
        if self.nf is not None:
            return self.nf
        return RATE_TO_NF[rate]

    def validate(self):
        if self.nf is not None:
            if int(self.nf) != self.nf or self.nf < 2 or self.nf % 2:
                raise ConfigError(f"nf: Nf must be even and >= 2 (got {self.nf})")
            if len(self.rate_mbps) != 1:
                raise ConfigError("nf: an explicit Nf needs exactly one rate_mbps")
            nominal = 1e3 / (self.nf * self.tf_ns)
            rate = self.rate_mbps[0]
            if RATE_TO_NF.get(rate) != self.nf and abs(nominal - rate) > 0.1 * rate:
                raise ConfigError(
                    f"rate_mbps: {rate} Mbit/s inconsistent with nf={self.nf}, tf_ns={self.tf_ns} "
                    f"({nominal:.3g} Mbit/s)"
                )
        else:
            for r in self.rate_mbps:
                if r not in RATE_TO_NF:
                    raise ConfigError(f"rate_mbps: no frame mapping for {r}; use {sorted(RATE_TO_NF)} or set nf")
        if not self.rate_mbps:
            raise ConfigError("rate_mbps: at least one rate required")
        if self.tcorr > self.tf_ns:
            raise ConfigError(f"tcorr_ns: Tcorr ({self.tcorr}) must not exceed Tf ({self.tf_ns})")
        if not 0 < self.truncation <= self.tf_ns / 2 + 1e-12:
            raise ConfigError(f"max_delay_ns: truncation must lie in (0, Tf/2], got {self.truncation}")
        for p in self.pulse:
            if p not in SHAPES:
                raise ConfigError(f"pulse: unknown shape {p!r}; expected {SHAPES}")
        if self.model not in MODELS:
            raise ConfigError(f"model: unknown channel model {self.model!r}")
        if self.snr_convention not in CONVENTIONS:
            raise ConfigError(f"snr_convention: expected one of {CONVENTIONS}")
        bad = set(self.receivers) - set(RECEIVERS)
        if bad or not self.receivers:
            raise ConfigError(f"receivers: expected a subset of {RECEIVERS}")
        if self.min_errors < 0 or self.max_bits < 0 or self.bits_per_burst < 0:
            raise ConfigError("min_errors/max_bits/bits_per_burst: must be non-negative")
        # surface the per-module invariants now rather than mid-run
        for rate in self.rate_mbps:
            self.system_config(rate)
        for p in self.pulse:
            self.pulse_spec(p)
        self.sv_params()

    # builders

    def system_config(self, rate):
        return SystemConfig(
            nf=self.nf_for(rate), tf=self.tf_ns, tw=self.tw_ns, tcorr=self.tcorr,
            fs=self.fs_per_ns, d_init=self.d_init,
        )

    def pulse_spec(self, shape):
        return PulseSpec(
            shape=shape, duration=self.tw_ns, sample_rate=self.fs_per_ns,
            rolloff=self.rolloff if shape == "raised_cosine" else None,
        )

    def sv_params(self):
        base = MODELS[self.model]
        over = {
            "cluster_rate": self.cluster_rate_per_ns, "ray_rate": self.ray_rate_per_ns,
            "cluster_decay": self.cluster_decay_ns, "ray_decay": self.ray_decay_ns,
            "cluster_fading_db": self.cluster_fading_db, "ray_fading_db": self.ray_fading_db,
        }
        return replace(base, max_delay=self.truncation, **{k: v for k, v in over.items() if v is not None})

    def plans(self, workers=None):
        out = []
        for rate in self.rate_mbps:
            for shape in self.pulse:
                out.append(TrialPlan(
                    rate_mbps=rate, pulse=self.pulse_spec(shape), snr_points=self.snr_db,
                    bits_per_burst=self.bits_per_burst, min_errors=self.min_errors,
                    max_bits=self.max_bits, master_seed=self.seed, channel=self.sv_params(),
                    system=self.system_config(rate), snr_convention=self.snr_convention,
                    receivers=self.receivers, workers=workers,
                ))
        return out


_FIELDS = {f.name: f for f in fields(RunConfig)}
_INT_LISTS = {"rate_mbps"}
_FLOAT_LISTS = {"snr_db"}
_STR_LISTS = {"pulse", "receivers"}
_INTS = {"nf", "d_init", "bits_per_burst", "min_errors", "max_bits", "seed"}
_STRS = {"model", "snr_convention", "out", "figure", "gnuplot_dir", "debug_correlations", "debug_spectrum"}


def _parse_float(text):
    t = text.strip().lower()
    if t in ("inf", "+inf", "infinity"):
        return math.inf
    return float(t)


def _parse_int(key, text):
    v = float(text)
    if v != int(v):
        raise ConfigError(f"{key}: expected an integer, got {text!r}")
    return int(v)


def convert(key, value):
    """Typed value for ``key`` from its text form."""
    if key not in _FIELDS:
        raise ConfigError(f"unknown key {key!r}")
    text = str(value).strip()
    if text.lower() in ("", "none") and key not in _INT_LISTS | _FLOAT_LISTS | _STR_LISTS:
        return None
    try:
        if key in _INT_LISTS:
            return tuple(_parse_int(key, v) for v in text.split(",") if v.strip())
        if key in _FLOAT_LISTS:
            return tuple(_parse_float(v) for v in text.split(",") if v.strip())
        if key in _STR_LISTS:
            return tuple(v.strip() for v in text.split(",") if v.strip())
        if key in _INTS:
            return _parse_int(key, text)
        if key in _STRS:
            return text
        return _parse_float(text)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {text!r} ({exc})") from None


def read_pairs(text):
    pairs = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value', got {raw.strip()!r}")
        k, v = line.split("=", 1)
        pairs[k.strip()] = v.strip()
    return pairs


def parse_config(path=None, overrides=None, text=None) -> RunConfig:
    """RunConfig from an optional file (or ``text``) plus ``overrides`` (key -> text or value)."""
    pairs = {}
    if path is not None:
        with open(path) as fh:
            pairs.update(read_pairs(fh.read()))
    if text is not None:
        pairs.update(read_pairs(text))
    values = {k: convert(k, v) for k, v in pairs.items()}
    for k, v in (overrides or {}).items():
        if v is None:
            continue
        values[k] = convert(k, v) if isinstance(v, str) else v
        if k not in _FIELDS:
            raise ConfigError(f"unknown key {k!r}")
    return RunConfig(**values)


def _render(v):
    if v is None:
        return "none"
    if isinstance(v, tuple):
        return ",".join(_render(x) for x in v)
    if isinstance(v, float):
        return "inf" if math.isinf(v) and v > 0 else repr(v)
    return str(v)


def dump_config(cfg: RunConfig) -> str:
    lines = ["# uwbsim run configuration"]
    for f in fields(RunConfig):
        lines.append(f"{f.name} = {_render(getattr(cfg, f.name))}")
    return "\n".join(lines) + "\n"
