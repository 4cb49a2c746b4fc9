"""Frequency-domain (FDR) receiver.

The Nf frame windows of bit m are despread by the running-product code c'
and projected onto exp(j*2*pi*n*l/Nf) over the frame index l:

    R_{m,n}(t) = sum_l c'_l r_m(l, t) exp(j 2 pi n l / Nf)

A +1 bit leaves the despread frames in phase, so the useful energy lands in
bin 0; a -1 bit alternates their sign and moves it to bin Nf/2. The decision
compares the two bin energies integrated over the window.
"""

from dataclasses import dataclass

import numpy as np

from .framing import count_bits, frame_windows


@dataclass(frozen=True)
class Decision:
    J: np.ndarray
    b_hat: np.ndarray


def segment_frames(r, m, cfg, n_bits=None):
    """(Nf, W) slices of bit m, slice l starting at (m*Nf + l)*Tf."""
    if n_bits is None:
        n_bits = count_bits(r, cfg)
    if not 0 <= m < n_bits:
        from .errors import FramingError

        raise FramingError(f"bit {m} outside the {n_bits} bits carried by the waveform")
    return frame_windows(r, cfg, m * cfg.nf, cfg.nf)


def _alternating(nf):
    return np.where(np.arange(nf) % 2, -1.0, 1.0)


def project(slices, code, n):
    """R_n(t) for one bin as a complex series."""
    slices = np.asarray(slices, dtype=float)
    nf = code.nf
    if slices.shape[0] != nf:
        raise ValueError(f"expected {nf} slices, got {slices.shape[0]}")
    if int(n) != n or not 0 <= n < nf:
        raise ValueError(f"bin {n} outside [0, {nf})")
    despread = code.derived[:, None] * slices
    if n == 0:
        return despread.sum(axis=0).astype(complex)
    if 2 * n == nf:
        return (_alternating(nf)[:, None] * despread).sum(axis=0).astype(complex)
    w = np.exp(2j * np.pi * n * np.arange(nf) / nf)
    return (w[:, None] * despread).sum(axis=0)


def full_spectrum(slices, code):
    """All Nf bins, shape (Nf, W). Uses an inverse FFT since the kernel sign is +j."""
    despread = code.derived[:, None] * np.asarray(slices, dtype=float)
    return np.fft.ifft(despread, axis=0) * code.nf


def two_bin(despread):
    """Real bins 0 and Nf/2 of despread frames shaped (..., Nf, W)."""
    nf = despread.shape[-2]
    r0 = despread.sum(axis=-2)
    rn2 = (_alternating(nf)[:, None] * despread).sum(axis=-2)
    return r0, rn2


def criterion(r0, rn2, dt) -> Decision:
    """J = sum(|R_0|**2 - |R_Nf/2|**2) * dt over the window; b_hat = +1 iff J >= 0."""
    r0, rn2 = np.asarray(r0), np.asarray(rn2)
    if r0.shape != rn2.shape:
        raise ValueError("bin series differ in length")
    J = np.sum(np.abs(r0) ** 2 - np.abs(rn2) ** 2, axis=-1) * dt
    return Decision(J=J, b_hat=np.where(J >= 0, 1, -1))


def decide_windows(windows, code, dt):
    """Decisions from an (N*Nf, W) window matrix."""
    nf, w = code.nf, windows.shape[-1]
    despread = windows.reshape(-1, nf, w) * code.derived[None, :, None]
    r0, rn2 = two_bin(despread)
    return criterion(r0, rn2, dt)


def bin_energies(windows, code, dt):
    """Integrated |R_n|**2 for every bit and bin, shape (N, Nf)."""
    nf, w = code.nf, windows.shape[-1]
    despread = windows.reshape(-1, nf, w) * code.derived[None, :, None]
    spec = np.fft.ifft(despread, axis=1) * nf
    return np.sum(np.abs(spec) ** 2, axis=-1) * dt


def decode_bits(r, code, cfg, n_bits=None):
    if n_bits is None:
        n_bits = count_bits(r, cfg)
    win = frame_windows(r, cfg, 0, n_bits * cfg.nf)
    return decide_windows(win, code, r.sample_period).b_hat
