"""BER-vs-SNR figures written next to the results table."""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

RECEIVER_LABEL = {"differential": "Differential", "fdr": "FDR"}
PULSE_LABEL = {"raised_cosine": "raised cosine", "square": "square", "gaussian_monocycle": "Gaussian monocycle"}
MARKERS = "osd^v<>"


def curve_label(receiver, rate, pulse, vary_rate, vary_pulse):
    parts = [RECEIVER_LABEL.get(receiver, receiver)]
    if vary_rate:
        parts.append(f"{rate} Mbit/s")
    if vary_pulse:
        parts.append(PULSE_LABEL.get(pulse, pulse))
    return ", ".join(parts)


def plot_ber(points, path, title=None, target_ber=1e-3):
    """Semilog BER curves, one per (receiver, rate, pulse), with Wilson 95% bars.

    Zero-error points have no place on a log axis and are left out.
    """
    curves = {}
    for p in points:
        if math.isfinite(p.snr_db):
            curves.setdefault((p.receiver, p.rate_mbps, p.pulse), []).append(p)
    vary_rate = len({k[1] for k in curves}) > 1
    vary_pulse = len({k[2] for k in curves}) > 1

    fig, ax = plt.subplots(figsize=(6.4, 4.8))
    for n, (key, pts) in enumerate(sorted(curves.items())):
        pts = sorted((q for q in pts if q.errors > 0), key=lambda q: q.snr_db)
        if not pts:
            continue
        x = [q.snr_db for q in pts]
        y = [q.ber for q in pts]
        err = [[q.ber - q.ci_low for q in pts], [q.ci_high - q.ber for q in pts]]
        ls = "-" if key[0] == "fdr" else "--"
        ax.errorbar(x, y, yerr=err, ls=ls, marker=MARKERS[n % len(MARKERS)], ms=4, capsize=2,
                    label=curve_label(*key, vary_rate, vary_pulse))
    if target_ber:
        ax.axhline(target_ber, color="0.6", lw=0.8, ls=":")
    ax.set_yscale("log")
    ax.set_xlabel("SNR (dB)")
    ax.set_ylabel("BER")
    ax.grid(True, which="both", alpha=0.3)
    if title:
        ax.set_title(title)
    if curves:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_pulses(pulses, path):
    fig, ax = plt.subplots(figsize=(6.4, 3.6))
    for p in pulses:
        ax.plot(p.times, p.samples, marker=".", label=PULSE_LABEL.get(p.spec.shape, p.spec.shape))
    ax.set_xlabel("t (ns)")
    ax.set_ylabel("amplitude")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
