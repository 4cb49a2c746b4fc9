"""Quick invariant suites runnable from the command line."""

import numpy as np

from . import fdr
from .channel import CM1, draw_channel
from .harness import received_pulse_window
from .pulses import PulseSpec, make_pulse
from .transmitter import (
    SpreadingCode, SystemConfig, amplitude_factor, closed_form_frames, differential_encode,
    generate_code,
)


def check_encoding(rng, cases=2000):
    for _ in range(cases):
        nf = int(rng.choice([2, 4, 8, 16]))
        code = generate_code(nf, rng)
        bits = rng.choice([-1, 1], size=int(rng.integers(1, 12)))
        d_init = int(rng.choice([-1, 1]))
        seq = differential_encode(bits, code, d_init=d_init)
        if not np.array_equal(seq.d, closed_form_frames(bits, code, d_init)):
            return False
        m = int(rng.integers(len(bits)))
        if amplitude_factor(m, bits, code, d_init) != seq.a[m]:
            return False
        if not np.array_equal(code.derived[1:] * code.derived[:-1], code.chips[1:]):
            return False
    return True


def check_concentration(rng, cases=200):
    pulse = make_pulse(PulseSpec())
    for _ in range(cases):
        nf = int(rng.choice([2, 4, 8, 16]))
        cfg = SystemConfig(nf=nf)
        ch = draw_channel(CM1, cfg.max_channel_delay, cfg.dt, rng)
        code = generate_code(nf, rng)
        bits = rng.choice([-1, 1], size=8)
        seq = differential_encode(bits, code, cfg)
        win = seq.d[:, None] * received_pulse_window(pulse, ch, cfg)[None, :]
        energy = fdr.bin_energies(win, code, cfg.dt)
        for m, b in enumerate(bits):
            k = 0 if b == 1 else nf // 2
            outside = energy[m].sum() - energy[m, k]
            if outside > 1e-9 * energy[m, k]:
                return False
    return True


def check_parseval(rng, cases=200):
    for _ in range(cases):
        nf = int(rng.choice([2, 4, 8, 16]))
        code = generate_code(nf, rng)
        slices = rng.standard_normal((nf, 32))
        spec = fdr.full_spectrum(slices, code)
        lhs = np.sum(np.abs(spec) ** 2, axis=0)
        rhs = nf * np.sum(slices**2, axis=0)
        if np.max(np.abs(lhs - rhs) / rhs) > 1e-9:
            return False
        r0, rn2 = fdr.two_bin(code.derived[:, None] * slices)
        if not (np.allclose(r0, spec[0].real, rtol=1e-12, atol=0)
                and np.allclose(rn2, spec[nf // 2].real, rtol=1e-12, atol=1e-12 * np.abs(rn2).max())):
            return False
    return True


SUITES = {
    "encoding closed form": check_encoding,
    "FDR bin concentration": check_concentration,
    "Parseval / two-bin equivalence": check_parseval,
}


def run(seed=2024, out=print):
    ok = True
    for name, fn in SUITES.items():
        passed = fn(np.random.default_rng(seed))
        ok &= passed
        out(f"{'PASS' if passed else 'FAIL'}  {name}")
    return ok
