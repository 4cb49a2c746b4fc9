"""Command-line front end: ``uwbsim <subcommand> ...``."""

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import differential, fdr, selftest
from .channel import MODELS, draw_channel
from .config import dump_config, parse_config
from .errors import ChannelDegenerateError, ConfigError, FramingError
from .harness import (
    burst_streams, clean_windows, draw_burst, ber_sweep, points_to_csv, write_gnuplot,
)
from .noise import NoiseSpec
from .pulses import SHAPES, PulseSpec, make_pulse
from .transmitter import RATE_TO_NF, SystemConfig, differential_encode, generate_code, synthesize

log = logging.getLogger("uwbsim")


def _write_text(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        Path(path).write_text(text)


def _columns(header, rows):
    lines = [f"# {header}"]
    lines += [" ".join(repr(float(v)) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


# ber-sweep

SWEEP_FLAGS = {
    "rate": "rate_mbps", "pulse": "pulse", "snr_db": "snr_db", "seed": "seed",
    "min_errors": "min_errors", "max_bits": "max_bits", "bits_per_burst": "bits_per_burst",
    "receivers": "receivers", "snr_convention": "snr_convention", "model": "model",
    "out": "out", "figure": "figure", "gnuplot": "gnuplot_dir",
    "debug_correlations": "debug_correlations", "debug_spectrum": "debug_spectrum",
}


def _overrides(args):
    over = {}
    for item in args.set or []:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        over[k.strip()] = v.strip()
    for flag, key in SWEEP_FLAGS.items():
        v = getattr(args, flag, None)
        if v is not None:
            over[key] = str(v)
    return over


def _dump_debug(cfg, plan):
    """Per-frame correlations and per-bin FDR energies for burst 0 at the first SNR point."""
    setup_rng, noise_rng = burst_streams(plan.master_seed, 0)
    burst = draw_burst(plan, setup_rng)
    win = clean_windows(plan, burst, make_pulse(plan.pulse))
    spec = NoiseSpec(plan.snr_points[0], fs=plan.system.fs, convention=plan.snr_convention, nf=plan.system.nf)
    if not spec.noiseless:
        win = win + noise_rng.standard_normal(win.shape) * spec.sigma
    dt = plan.system.dt
    if cfg.debug_correlations:
        y = differential.correlate_windows(win, dt)
        _write_text(cfg.debug_correlations, "# y_j\n" + "".join(f"{float(v)!r}\n" for v in y))
    if cfg.debug_spectrum:
        e = fdr.bin_energies(win[1:], burst.code, dt)
        lines = ["# n integral_of_|R|^2, one block per bit"]
        for m, row in enumerate(e):
            lines.append(f"# bit {m}")
            lines += [f"{n} {float(v)!r}" for n, v in enumerate(row)]
        _write_text(cfg.debug_spectrum, "\n".join(lines) + "\n")


def cmd_ber_sweep(args):
    cfg = parse_config(args.config, _overrides(args))
    if args.dump_config:
        _write_text(args.dump_config, dump_config(cfg))
    plans = cfg.plans(workers=args.workers)
    if cfg.debug_correlations or cfg.debug_spectrum:
        _dump_debug(cfg, plans[0])

    def progress(p):
        log.info("%s %s Mbit/s %s SNR %s dB: %d/%d errors, BER %.3g",
                 p.receiver, p.rate_mbps, p.pulse, p.snr_db, p.errors, p.bits, p.ber)

    points = []
    for plan in plans:
        points += ber_sweep(plan, progress=progress)
    _write_text(cfg.out, points_to_csv(points))
    if cfg.gnuplot_dir:
        write_gnuplot(points, cfg.gnuplot_dir)
    figure = cfg.figure
    if figure is None and cfg.out not in (None, "-") and not args.no_figure:
        figure = str(Path(cfg.out).with_suffix(".png"))
    if figure and not args.no_figure:
        from .plotting import plot_ber

        plot_ber(points, figure)
        log.info("figure written to %s", figure)
    return 0


# channel-gen

def cmd_channel_gen(args):
    params = MODELS[args.model].with_max_delay(args.max_delay_ns)
    dt = 1.0 / args.fs
    lines = [
        f"# channel-gen model={args.model} seed={args.seed} fs_per_ns={args.fs} max_delay_ns={args.max_delay_ns}",
        "# columns: delay_ns gain",
    ]
    for k in range(args.count):
        rng, _ = burst_streams(args.seed, k)
        while True:
            try:
                ch = draw_channel(params, args.max_delay_ns, dt, rng)
                break
            except ChannelDegenerateError:
                log.info("realization %d degenerate, redrawing", k)
        lines.append(f"# realization {k} L={len(ch)}")
        lines += [f"{d!r} {g!r}" for d, g in ch.taps]
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# pulse-dump

def cmd_pulse_dump(args):
    spec = PulseSpec(
        shape=args.shape, duration=args.tw, sample_rate=args.fs,
        rolloff=args.rolloff if args.shape == "raised_cosine" else None,
    )
    p = make_pulse(spec)
    _write_text(args.out, _columns("t_ns amplitude", zip(p.times, p.samples)))
    if args.figure:
        from .plotting import plot_pulses

        plot_pulses([p], args.figure)
    return 0


# waveform-dump

def _read_bits(path):
    vals = np.loadtxt(path, comments="#", dtype=float).ravel()
    if np.all(np.isin(vals, (0, 1))) and not np.any(vals == -1):
        vals = 2 * vals - 1
    return vals.astype(np.int64)


def cmd_waveform_dump(args):
    rng = np.random.default_rng(args.seed)
    cfg = SystemConfig.for_rate(args.rate, tw=args.tw, fs=args.fs)
    if args.bits:
        bits = _read_bits(args.bits)
    else:
        bits = rng.choice(np.array([-1, 1]), size=args.random)
    code = generate_code(cfg.nf, rng)
    seq = differential_encode(bits, code, cfg)
    pulse = make_pulse(PulseSpec(
        shape=args.pulse, duration=args.tw, sample_rate=args.fs,
        rolloff=0.6 if args.pulse == "raised_cosine" else None,
    ))
    w = synthesize(seq, pulse, cfg)
    _write_text(args.out, _columns("t_ns amplitude", zip(w.times, w.samples)))
    if args.code_out:
        _write_text(args.code_out, "# chips c\n" + " ".join(f"{c:+d}" for c in code.chips) + "\n"
                    "# derived c'\n" + " ".join(f"{c:+d}" for c in code.derived) + "\n")
    if args.d_out:
        _write_text(args.d_out, "# d_j\n" + " ".join(f"{d:+d}" for d in seq.d) + "\n")
    return 0


# selftest

def cmd_selftest(args):
    return 0 if selftest.run(seed=args.seed) else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="uwbsim", description=__doc__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ber-sweep", help="Monte Carlo BER vs SNR for both receivers")
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override any config key")
    p.add_argument("--rate", help="data rate(s) in Mbit/s, comma separated (6, 12, 25)")
    p.add_argument("--pulse", help=f"pulse shape(s), comma separated {SHAPES}")
    p.add_argument("--snr-db", help="SNR points in dB, comma separated; 'inf' for noiseless")
    p.add_argument("--snr-convention", choices=("eb", "ep"))
    p.add_argument("--receivers", help="differential,fdr")
    p.add_argument("--model", choices=sorted(MODELS))
    p.add_argument("--seed", type=int)
    p.add_argument("--min-errors", type=int)
    p.add_argument("--max-bits", type=int)
    p.add_argument("--bits-per-burst", type=int)
    p.add_argument("--workers", type=int, help="worker processes (default UWBSIM_THREADS, 0 = all cores)")
    p.add_argument("--out", help="results CSV ('-' for stdout)")
    p.add_argument("--figure", help="BER figure path (default: CSV path with .png)")
    p.add_argument("--no-figure", action="store_true")
    p.add_argument("--gnuplot", metavar="DIR", help="also write per-curve two-column files")
    p.add_argument("--debug-correlations", metavar="FILE")
    p.add_argument("--debug-spectrum", metavar="FILE")
    p.add_argument("--dump-config", metavar="FILE", help="write the resolved configuration")
    p.set_defaults(func=cmd_ber_sweep)

    p = sub.add_parser("channel-gen", help="draw S-V tapped delay lines")
    p.add_argument("--model", choices=sorted(MODELS), default="cm1")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fs", type=float, default=20.0, help="samples per ns")
    p.add_argument("--max-delay-ns", type=float, default=5.0)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_channel_gen)

    p = sub.add_parser("pulse-dump", help="write a sampled transmit pulse")
    p.add_argument("--shape", choices=SHAPES, default="raised_cosine")
    p.add_argument("--tw", type=float, default=0.8, help="pulse duration, ns")
    p.add_argument("--fs", type=float, default=20.0, help="samples per ns")
    p.add_argument("--rolloff", type=float, default=0.6)
    p.add_argument("--out", default="-")
    p.add_argument("--figure")
    p.set_defaults(func=cmd_pulse_dump)

    p = sub.add_parser("waveform-dump", help="write a transmitted burst")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--bits", metavar="FILE", help="bits as +-1 or 0/1 text")
    src.add_argument("--random", type=int, metavar="N", help="N random bits")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rate", type=int, choices=sorted(RATE_TO_NF), default=6)
    p.add_argument("--pulse", choices=SHAPES, default="raised_cosine")
    p.add_argument("--tw", type=float, default=0.8)
    p.add_argument("--fs", type=float, default=20.0)
    p.add_argument("--out", default="-")
    p.add_argument("--code-out", metavar="FILE")
    p.add_argument("--d-out", metavar="FILE")
    p.set_defaults(func=cmd_waveform_dump)

    p = sub.add_parser("selftest", help="run the encoding, concentration and Parseval suites")
    p.add_argument("--seed", type=int, default=2024)
    p.set_defaults(func=cmd_selftest)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, FramingError, ChannelDegenerateError, OSError) as exc:
        print(f"uwbsim: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
