"""Monte Carlo BER engine.

A burst is one channel realization, one spreading code and
``bits_per_burst`` random bits. Burst ``k`` draws everything from
``SeedSequence([master_seed, k])``, so results do not depend on scheduling and
every SNR point sees the same channels, codes, bits and noise shape (common
random numbers). Both receivers decode the same noisy samples.

Only the Tcorr integration windows are ever observed by the receivers, and
the truncated channel keeps each frame's echo inside its own window, so the
default ``windows`` mode builds the (frames, W) window matrix directly and
draws noise only there. ``waveform`` mode runs the full
synthesize/apply_channel/add_awgn chain instead.
"""

import csv
import io
import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.stats import binomtest

from . import differential, fdr
from .channel import CM1, SVParams, apply_channel, draw_channel
from .errors import ChannelDegenerateError, ConfigError
from .framing import frame_windows
from .noise import NoiseSpec, add_awgn
from .pulses import PulseSpec, make_pulse
from .transmitter import SystemConfig, differential_encode, generate_code, synthesize
from .waveform import Waveform

log = logging.getLogger(__name__)

RECEIVERS = ("differential", "fdr")
CSV_COLUMNS = ("receiver", "rate_mbps", "pulse", "snr_db", "bits", "errors", "ber", "ci_low", "ci_high")
MAX_REDRAWS = 100


@dataclass(frozen=True)
class TrialPlan:
    rate_mbps: int = 6
    pulse: PulseSpec = field(default_factory=PulseSpec)
    snr_points: Tuple[float, ...] = (math.inf,)
    bits_per_burst: int = 1000
    min_errors: int = 200
    max_bits: int = 2_000_000
    master_seed: int = 0
    channel: SVParams = CM1
    system: Optional[SystemConfig] = None
    snr_convention: str = "eb"
    receivers: Tuple[str, ...] = RECEIVERS
    mode: str = "windows"
    workers: Optional[int] = None  # None: UWBSIM_THREADS, 0: all cores

    def __post_init__(self):
        if self.system is None:
            cfg = SystemConfig.for_rate(
                self.rate_mbps, tw=self.pulse.duration, fs=self.pulse.sample_rate,
                tcorr=self.pulse.duration + SystemConfig().tf / 2,
            )
            object.__setattr__(self, "system", cfg)
        object.__setattr__(self, "snr_points", tuple(float(s) for s in self.snr_points))
        if self.bits_per_burst < 0 or self.max_bits < 0 or self.min_errors < 0:
            raise ConfigError("bit and error budgets must be non-negative")
        bad = set(self.receivers) - set(RECEIVERS)
        if bad:
            raise ConfigError(f"unknown receivers {sorted(bad)}")
        if self.mode not in ("windows", "waveform"):
            raise ConfigError(f"unknown simulation mode {self.mode!r}")
        cfg = self.system
        if self.pulse.duration > cfg.tf:
            raise ConfigError("pulse longer than a frame")
        if abs(self.pulse.sample_rate - cfg.fs) > 1e-12:
            raise ConfigError("pulse and system sample rates differ")
        if cfg.tcorr < cfg.tw + min(self.channel.max_delay, cfg.max_channel_delay) - 1e-9:
            log.warning("Tcorr %.3g ns does not cover pulse plus channel spread", cfg.tcorr)

    @property
    def channel_params(self):
        """S-V parameters with arrivals limited to the Tf/2 truncation point."""
        return self.channel.with_max_delay(min(self.channel.max_delay, self.system.max_channel_delay))


@dataclass(frozen=True)
class BerPoint:
    receiver: str
    rate_mbps: int
    pulse: str
    snr_db: float
    bits: int
    errors: int
    ber: float
    ci_low: float
    ci_high: float

    def row(self):
        return [
            self.receiver, str(self.rate_mbps), self.pulse, _fmt(self.snr_db), str(self.bits),
            str(self.errors), _fmt(self.ber), _fmt(self.ci_low), _fmt(self.ci_high),
        ]


def _fmt(x):
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def wilson_interval(errors, bits, confidence=0.95):
    if bits == 0:
        return 0.0, 1.0
    ci = binomtest(int(errors), int(bits)).proportion_ci(confidence_level=confidence, method="wilson")
    return float(ci.low), float(ci.high)


def burst_streams(master_seed, index):
    """(setup rng, noise rng) for burst ``index``."""
    setup, noise = np.random.SeedSequence([int(master_seed), int(index)]).spawn(2)
    return np.random.Generator(np.random.PCG64(setup)), np.random.Generator(np.random.PCG64(noise))


@dataclass
class Burst:
    bits: np.ndarray
    code: object
    channel: object
    seq: object
    redraws: int


def draw_burst(plan: TrialPlan, rng) -> Burst:
    cfg = plan.system
    params = plan.channel_params
    redraws = 0
    while True:
        try:
            ch = draw_channel(params, cfg.max_channel_delay, cfg.dt, rng)
            break
        except ChannelDegenerateError:
            redraws += 1
            if redraws >= MAX_REDRAWS:
                raise
    if redraws:
        log.info("redrew a degenerate channel %d time(s)", redraws)
    code = generate_code(cfg.nf, rng)
    bits = rng.choice(np.array([-1, 1]), size=plan.bits_per_burst)
    seq = differential_encode(bits, code, cfg)
    return Burst(bits, code, ch, seq, redraws)


def received_pulse_window(pulse, ch, cfg):
    """First W samples of the channel-filtered pulse at per-frame amplitude."""
    w = cfg.window_samples
    rx = apply_channel(Waveform(np.asarray(pulse.samples) / np.sqrt(cfg.nf), cfg.dt), ch).samples
    out = np.zeros(w)
    n = min(w, len(rx))
    out[:n] = rx[:n]
    return out


def clean_windows(plan, burst, pulse):
    """(N*Nf + 1, W) noiseless windows; row 0 is the reference frame."""
    d = np.concatenate(([burst.seq.d_init], burst.seq.d)).astype(float)
    return d[:, None] * received_pulse_window(pulse, burst.channel, plan.system)[None, :]


def _decode(plan, windows, code, dt):
    out = {}
    if "differential" in plan.receivers:
        out["differential"] = differential.decide_windows(windows, code, dt)
    if "fdr" in plan.receivers:
        out["fdr"] = fdr.decide_windows(windows[1:], code, dt).b_hat
    return out


def _received(plan, burst, pulse, snr_db, noise_rng):
    cfg = plan.system
    spec = NoiseSpec(snr_db, fs=cfg.fs, convention=plan.snr_convention, nf=cfg.nf)
    if plan.mode == "windows":
        win = clean_windows(plan, burst, pulse)
        if not spec.noiseless:
            win = win + noise_rng.standard_normal(win.shape) * spec.sigma
        return win
    tx = synthesize(burst.seq, pulse, cfg, reference_frame=True)
    rx = add_awgn(apply_channel(tx, burst.channel), spec, noise_rng)
    return frame_windows(rx, cfg, -1, len(burst.bits) * cfg.nf + 1)


def run_burst(plan: TrialPlan, burst_index: int, snr_db=None, pulse=None):
    """Simulate one burst; returns (tx bits, differential decisions, FDR decisions).

    A receiver left out of ``plan.receivers`` yields None.
    """
    if snr_db is None:
        snr_db = plan.snr_points[0]
    pulse = pulse or make_pulse(plan.pulse)
    setup_rng, noise_rng = burst_streams(plan.master_seed, burst_index)
    burst = draw_burst(plan, setup_rng)
    if len(burst.bits) == 0:
        empty = np.zeros(0, dtype=np.int64)
        return burst.bits, empty, empty
    win = _received(plan, burst, pulse, snr_db, noise_rng)
    dec = _decode(plan, win, burst.code, plan.system.dt)
    return burst.bits, dec.get("differential"), dec.get("fdr")


def _burst_errors(args):
    plan, index, snr_db = args
    tx, dd, df = run_burst(plan, index, snr_db)
    out = []
    for name, dec in (("differential", dd), ("fdr", df)):
        out.append(None if dec is None else int(np.count_nonzero(dec != tx)))
    return len(tx), out


def worker_count(requested=None):
    if requested is None:
        requested = int(os.environ.get("UWBSIM_THREADS", "1") or 1)
    if requested <= 0:
        requested = os.cpu_count() or 1
    return requested


def ber_sweep(plan: TrialPlan, progress=None):
    """BerPoints ordered by SNR then receiver.

    Bursts are consumed in index order per SNR point; a receiver stops counting
    once it has ``min_errors`` errors or ``max_bits`` bits, so the tallies are
    identical for any worker count.
    """
    workers = worker_count(plan.workers)
    points = []
    pool = ProcessPoolExecutor(workers) if workers > 1 else None
    try:
        for snr in plan.snr_points:
            tallies = {r: [0, 0] for r in plan.receivers}
            done = {r: False for r in plan.receivers}
            if plan.bits_per_burst == 0 or plan.max_bits == 0:
                done = {r: True for r in plan.receivers}
            index = 0
            while not all(done.values()):
                batch = [(plan, index + k, snr) for k in range(max(workers, 1))]
                index += len(batch)
                results = pool.map(_burst_errors, batch) if pool else map(_burst_errors, batch)
                for n, errs in results:
                    for r, e in zip(RECEIVERS, errs):
                        if r not in tallies or done[r]:
                            continue
                        t = tallies[r]
                        t[0] += n
                        t[1] += e
                        if t[1] >= plan.min_errors or t[0] >= plan.max_bits:
                            done[r] = True
            for r in plan.receivers:
                bits, errors = tallies[r]
                lo, hi = wilson_interval(errors, bits)
                points.append(BerPoint(
                    r, plan.rate_mbps, plan.pulse.shape, snr, bits, errors,
                    errors / bits if bits else 0.0, lo, hi,
                ))
                if progress:
                    progress(points[-1])
    finally:
        if pool:
            pool.shutdown()
    return points


def snr_at_ber(points, target_ber, receiver=None):
    """SNR (dB) where the curve crosses ``target_ber``, interpolating log10(BER) linearly in dB.

    ``points`` are BerPoints or (snr_db, ber) pairs. Returns None when no pair of
    neighbouring finite-SNR points with non-zero BER brackets the target.
    """
    pairs = []
    for p in points:
        if isinstance(p, BerPoint):
            if receiver is not None and p.receiver != receiver:
                continue
            pairs.append((p.snr_db, p.ber))
        else:
            pairs.append((float(p[0]), float(p[1])))
    pairs = sorted((s, b) for s, b in pairs if math.isfinite(s))
    for (s0, b0), (s1, b1) in zip(pairs, pairs[1:]):
        if b0 == target_ber:
            return s0
        if b0 > target_ber >= b1 or b0 < target_ber <= b1:
            if b1 == target_ber:
                return s1
            if b0 <= 0 or b1 <= 0:
                return None
            frac = (math.log10(target_ber) - math.log10(b0)) / (math.log10(b1) - math.log10(b0))
            return s0 + frac * (s1 - s0)
    if pairs and pairs[-1][1] == target_ber:
        return pairs[-1][0]
    return None


def points_to_csv(points, fh=None):
    """Write the results table; returns the text when ``fh`` is None."""
    own = fh is None
    fh = fh or io.StringIO()
    fh.write("# schema: " + ",".join(CSV_COLUMNS) + "\n")
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow(p.row())
    if own:
        return fh.getvalue()


def read_points_csv(path):
    points = []
    with open(path) as fh:
        rows = [line for line in fh if not line.startswith("#")]
    for rec in csv.DictReader(rows):
        points.append(BerPoint(
            rec["receiver"], int(rec["rate_mbps"]), rec["pulse"], float(rec["snr_db"]),
            int(rec["bits"]), int(rec["errors"]), float(rec["ber"]),
            float(rec["ci_low"]), float(rec["ci_high"]),
        ))
    return points


def curve_key(p):
    return (p.receiver, p.rate_mbps, p.pulse)


def write_gnuplot(points, directory):
    """One two-column (snr_db, ber) file per curve; returns the paths written."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    curves = {}
    for p in points:
        curves.setdefault(curve_key(p), []).append(p)
    paths = []
    for (rx, rate, pulse), pts in sorted(curves.items()):
        path = directory / f"{rx}_{rate}mbps_{pulse}.dat"
        with open(path, "w") as fh:
            fh.write("# snr_db ber\n")
            for p in sorted(pts, key=lambda q: q.snr_db):
                fh.write(f"{_fmt(p.snr_db)} {_fmt(p.ber)}\n")
        paths.append(path)
    return paths
