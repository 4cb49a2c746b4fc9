from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Waveform:
    """Uniformly sampled real baseband signal.

    ``t0`` is the time (ns) of the first sample; a burst carrying a reference
    frame before the data starts at ``t0 = -Tf``.
    """

    samples: np.ndarray
    sample_period: float
    t0: float = 0.0

    def __len__(self):
        return len(self.samples)

    @property
    def times(self):
        return self.t0 + np.arange(len(self.samples)) * self.sample_period

    @property
    def energy(self):
        return float(np.sum(self.samples**2) * self.sample_period)

    def index_of(self, t):
        """Sample index of time ``t`` (ns), rounded to the grid."""
        return int(round((t - self.t0) / self.sample_period))

    def scaled(self, k):
        return Waveform(self.samples * k, self.sample_period, self.t0)
