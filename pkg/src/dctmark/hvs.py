"""Per-block statistics and the adaptive scaling/embedding factors.

All functions take a DCT grid of shape ``(blocks_y, blocks_x, 8, 8)`` (or any
stack of 8x8 blocks) and return per-block arrays with the leading shape of
the grid.
"""
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigError
from .imagecore import BLOCK, partition_blocks

EPS_VAR = 1e-12
NORM_LO, NORM_HI = 0.1, 1.0

SOBEL_THRESHOLD = 100.0
EDGE_FRACTION = 0.15


@dataclass(frozen=True)
class FactorConfig:
    alpha_min: float = 0.95
    alpha_max: float = 0.98
    beta_min: float = 0.05
    beta_max: float = 0.17

    def __post_init__(self):
        if not 0 < self.alpha_min <= self.alpha_max <= 1:
            raise ConfigError(
                f"need 0 < alpha_min <= alpha_max <= 1, got "
                f"({self.alpha_min}, {self.alpha_max})"
            )
        if not 0 <= self.beta_min <= self.beta_max:
            raise ConfigError(
                f"need 0 <= beta_min <= beta_max, got ({self.beta_min}, {self.beta_max})"
            )


@dataclass(frozen=True)
class EdgeConfig:
    threshold: float = SOBEL_THRESHOLD
    fraction: float = EDGE_FRACTION


@dataclass(frozen=True)
class GlobalStats:
    mu_prime: float
    c00_min: float
    c00_max: float
    sigma_min: float
    sigma_max: float


@dataclass
class BlockStats:
    mu_prime: np.ndarray
    sigma: np.ndarray
    sigma_prime: np.ndarray
    mu_ac: np.ndarray
    is_edge: np.ndarray


def _normalize(values):
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        return np.full(values.shape, NORM_HI), lo, hi
    return NORM_LO + (NORM_HI - NORM_LO) * (values - lo) / (hi - lo), lo, hi


def block_means(coeffs):
    """Normalized DC per block and the image-wide mean of those values.

    Returns ``(mu_prime_n, mu_prime, c00_min, c00_max)``.
    """
    c00 = np.asarray(coeffs, dtype=np.float64)[..., 0, 0]
    mu_n, lo, hi = _normalize(c00)
    return mu_n, float(mu_n.mean()), lo, hi


def _ac(coeffs):
    coeffs = np.asarray(coeffs, dtype=np.float64)
    flat = coeffs.reshape(coeffs.shape[:-2] + (BLOCK * BLOCK,))
    return flat[..., 1:]


def block_log_variances(coeffs):
    """Log variance of the 63 AC terms per block, raw and normalized.

    Returns ``(sigma_n, sigma_prime_n, mu_ac_n, sigma_min, sigma_max)``.
    Zero variance is replaced by ``EPS_VAR`` before the log.
    """
    ac = _ac(coeffs)
    mu_ac = ac.mean(axis=-1)
    var = ((ac - mu_ac[..., None]) ** 2).mean(axis=-1)
    sigma = np.log(np.where(var > 0, var, EPS_VAR))
    sigma_prime, lo, hi = _normalize(sigma)
    return sigma, sigma_prime, mu_ac, lo, hi


def sobel_magnitude(plane):
    plane = np.asarray(plane, dtype=np.float64)
    gx = ndimage.sobel(plane, axis=1, mode="nearest")
    gy = ndimage.sobel(plane, axis=0, mode="nearest")
    return np.hypot(gx, gy)


def detect_edge_blocks(plane, edge=EdgeConfig()):
    """Boolean ``(blocks_y, blocks_x)`` mask of blocks rich in strong gradients."""
    strong = sobel_magnitude(plane) > edge.threshold
    frac = partition_blocks(strong.astype(np.float64)).mean(axis=(-2, -1))
    return frac > edge.fraction


def cover_statistics(coeffs, plane, edge=EdgeConfig()):
    """Collect every per-block and global statistic the factor model needs.

    ``plane`` is the extended spatial plane that ``coeffs`` was computed from.
    """
    mu_n, mu, c_lo, c_hi = block_means(coeffs)
    sigma, sigma_n, mu_ac, s_lo, s_hi = block_log_variances(coeffs)
    stats = BlockStats(
        mu_prime=mu_n,
        sigma=sigma,
        sigma_prime=sigma_n,
        mu_ac=mu_ac,
        is_edge=detect_edge_blocks(plane, edge),
    )
    return stats, GlobalStats(mu, c_lo, c_hi, s_lo, s_hi)


def compute_factors(mu_prime_n, sigma_prime_n, mu_prime, is_edge, cfg=FactorConfig()):
    """Per-block ``(alpha_n, beta_n)`` arrays, clamped to the configured ranges.

    Edge blocks get ``(alpha_max, beta_min)``. Elsewhere alpha grows with
    texture and peaks where the block mean equals the image mean; beta does
    the opposite.
    """
    mu_prime_n = np.asarray(mu_prime_n, dtype=np.float64)
    sigma_prime_n = np.asarray(sigma_prime_n, dtype=np.float64)
    is_edge = np.asarray(is_edge, dtype=bool)
    if np.any(sigma_prime_n <= 0):
        raise ConfigError("normalized log variances must be positive")

    bell = np.exp(-((mu_prime_n - mu_prime) ** 2))
    alpha = cfg.alpha_min + (cfg.alpha_max - cfg.alpha_min) * sigma_prime_n * bell
    beta = cfg.beta_min + (cfg.beta_max - cfg.beta_min) * (1.0 - bell) / sigma_prime_n
    alpha = np.clip(alpha, cfg.alpha_min, cfg.alpha_max)
    beta = np.clip(beta, cfg.beta_min, cfg.beta_max)
    alpha = np.where(is_edge, cfg.alpha_max, alpha)
    beta = np.where(is_edge, cfg.beta_min, beta)
    return alpha, beta
