class ConfigError(ValueError):
    """Invalid parameter or inconsistent configuration."""


class ChannelDegenerateError(RuntimeError):
    """No channel tap survived truncation."""


class FramingError(ValueError):
    """Waveform does not cover the frames a receiver needs."""
