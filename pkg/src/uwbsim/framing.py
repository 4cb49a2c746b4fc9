import numpy as np

from .errors import FramingError


def count_bits(r, cfg):
    """Whole bits covered by ``r`` from t = 0, allowing a trailing channel tail."""
    t_end = r.t0 + len(r.samples) * r.sample_period
    frames = int(np.floor((t_end - cfg.tcorr) / cfg.tf + 1e-9)) + 1
    return max(frames, 0) // cfg.nf


def frame_windows(r, cfg, first_frame, n_frames):
    """Integration windows [j*Tf, j*Tf + Tcorr) for frames first_frame .. first_frame+n_frames-1.

    Returns an (n_frames, W) view-free array.
    """
    ns, w = cfg.frame_samples, cfg.window_samples
    start = r.index_of(first_frame * cfg.tf)
    stop = start + (n_frames - 1) * ns + w
    if n_frames == 0:
        return np.zeros((0, w))
    if start < 0 or stop > len(r.samples):
        raise FramingError(
            f"frames {first_frame}..{first_frame + n_frames - 1} need samples [{start}, {stop}) "
            f"but the waveform has [0, {len(r.samples)})"
        )
    idx = start + np.arange(n_frames)[:, None] * ns + np.arange(w)[None, :]
    return r.samples[idx]
