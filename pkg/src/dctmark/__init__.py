"""Block-DCT visible and invisible image watermarking."""
from .attacks import AttackSpec, attack, default_suite, run_attack_matrix
from .errors import (
    CapacityError,
    ConfigError,
    DimensionError,
    GrayImageError,
    ImageError,
    InvalidKeyError,
    WatermarkError,
)
from .hvs import EdgeConfig, FactorConfig, compute_factors, cover_statistics
from .imagecore import load_image, save_image
from .invisible import (
    AlphaConfig,
    AuthDecision,
    binarize,
    capacity,
    embed_invisible,
    extract_watermark,
)
from .keystream import encrypt_watermark
from .metrics import mse, psnr, quality
from .visible import PlacementSpec, embed_visible

__version__ = "0.1.0"
