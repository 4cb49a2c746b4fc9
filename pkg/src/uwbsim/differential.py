"""Frame-differential autocorrelation receiver.

Each frame's integration window is correlated with the window one frame
earlier, ``y_j = sum_k r[j*Tf + k] * r[(j-1)*Tf + k] * dt`` over Tcorr. With
the shared transmitter ``d_j * d_{j-1} = c_i * b_m``, so despreading by the
chip ``c_i`` and summing over the bit leaves ``b_m`` times the per-bit energy.
"""

from dataclasses import dataclass

import numpy as np

from .framing import count_bits, frame_windows


@dataclass(frozen=True)
class FrameCorrelations:
    y: np.ndarray
    window: float  # ns

    def __post_init__(self):
        if not np.all(np.isfinite(self.y)):
            raise ValueError("non-finite frame correlation")


def correlate_windows(windows, dt):
    """Lag-one correlations of consecutive rows; row 0 is the reference frame."""
    return np.einsum("ij,ij->i", windows[1:], windows[:-1]) * dt


def correlate_frames(r, cfg, n_bits=None) -> FrameCorrelations:
    """y_j for every data frame; ``r`` must hold the reference frame at t = -Tf."""
    if n_bits is None:
        n_bits = count_bits(r, cfg)
    win = frame_windows(r, cfg, -1, n_bits * cfg.nf + 1)
    return FrameCorrelations(correlate_windows(win, r.sample_period), cfg.tcorr)


def despread_decide(y, code, cfg=None):
    """sign(sum_i c_i * y_{m*Nf+i}) per bit, ties to +1."""
    y = y.y if isinstance(y, FrameCorrelations) else np.asarray(y)
    nf = code.nf
    if len(y) % nf:
        raise ValueError(f"{len(y)} correlations is not a whole number of {nf}-frame bits")
    stat = y.reshape(-1, nf) @ code.chips.astype(float)
    return np.where(stat >= 0, 1, -1)


def decide_windows(windows, code, dt):
    """Decisions straight from the (N*Nf + 1, W) window matrix."""
    return despread_decide(correlate_windows(windows, dt), code)


def decode_bits(r, code, cfg, n_bits=None):
    return despread_decide(correlate_frames(r, cfg, n_bits), code, cfg)
