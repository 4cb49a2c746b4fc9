"""Direct-sequence UWB impulse radio link simulator.

Implements a differentially encoded DS-UWB transmitter, the classical
frame-differential autocorrelation receiver and a frequency-domain (FDR)
receiver that projects the despread frames onto a DFT basis over the frame
index, plus a Saleh-Valenzuela channel and a Monte Carlo BER harness.
"""

from .errors import ChannelDegenerateError, ConfigError, FramingError
from .waveform import Waveform
from .pulses import PulseSpec, Pulse, make_pulse, pulse_energy
from .channel import (
    SVParams,
    RawArrivals,
    ChannelRealization,
    CM1,
    sample_sv,
    to_tapped_delay_line,
    truncate_and_normalize,
    apply_channel,
    draw_channel,
)
from .transmitter import (
    SystemConfig,
    SpreadingCode,
    EncodedSequence,
    generate_code,
    differential_encode,
    amplitude_factor,
    synthesize,
)
from .noise import NoiseSpec, add_awgn
from . import differential, fdr
from .harness import TrialPlan, BerPoint, run_burst, ber_sweep, snr_at_ber

__version__ = "0.1.0"
