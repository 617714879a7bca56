"""MSE and PSNR between two 8-bit images."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

INF = math.inf


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr_db: float
    bit_depth: int = 8

    def psnr_text(self):
        return "inf" if math.isinf(self.psnr_db) else f"{self.psnr_db:.2f}"


def mse(a, b):
    """Mean squared difference over every sample (all rows, columns, channels)."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"image shapes differ: {a.shape} vs {b.shape}")
    diff = a.astype(np.float64) - b.astype(np.float64)
    return float(np.mean(diff * diff))


def psnr_from_mse(err, bit_depth=8):
    if err == 0:
        return INF
    peak = (2**bit_depth - 1) ** 2
    return 10.0 * math.log10(peak / err)


def psnr(a, b, bit_depth=8):
    """PSNR in dB; ``math.inf`` when the images are identical."""
    return psnr_from_mse(mse(a, b), bit_depth)


def quality(a, b, bit_depth=8):
    err = mse(a, b)
    return QualityReport(err, psnr_from_mse(err, bit_depth), bit_depth)
