class WatermarkError(Exception):
    """Base class for errors raised by dctmark."""


class ImageError(WatermarkError):
    def __init__(self, path, reason):
        self.path = str(path)
        self.reason = reason
        super().__init__(f"{self.path}: {reason}")


class GrayImageError(WatermarkError, ValueError):
    """Raised when a color-only operation receives a single-channel image."""


class DimensionError(WatermarkError, ValueError):
    pass


class ConfigError(WatermarkError, ValueError):
    pass


class InvalidKeyError(WatermarkError, ValueError):
    pass


class CapacityError(WatermarkError, ValueError):
    def __init__(self, bits, max_bits):
        self.bits = bits
        self.max_bits = max_bits
        super().__init__(
            f"watermark has {bits} bits but the cover holds at most {max_bits}"
        )
