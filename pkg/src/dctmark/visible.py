"""Visible watermark fusion in the block DCT domain.

The logo is resized, placed on an 8-aligned anchor, and mixed into every
cover block it touches as ``c' = alpha_n * c + beta_n * w`` with
per-block factors from :mod:`dctmark.hvs`. Blocks outside the logo are left
as they are.
"""
from dataclasses import dataclass, replace

import numpy as np
from scipy import ndimage

from .errors import ConfigError, DimensionError
from .hvs import EdgeConfig, FactorConfig, compute_factors, cover_statistics
from .imagecore import (
    BLOCK,
    channels,
    dct2d,
    extend_plane,
    idct2d,
    assemble_plane,
    partition_blocks,
    rgb_to_ycbcr,
    to_gray,
    to_uint8,
    ycbcr_to_rgb,
)

ANCHORS = tuple(
    f"{v}-{h}" for v in ("top", "middle", "bottom") for h in ("left", "center", "right")
)

GRAY_ON_GRAY = "gray-on-gray"
COLOR_ON_COLOR = "color-on-color"
GRAY_ON_COLOR = "gray-on-color"


def normalize_anchor(name):
    """Accept 'Middle Center', 'middle_center', 'middle-center', ..."""
    key = "-".join(str(name).lower().replace("_", " ").replace("-", " ").split())
    if key not in ANCHORS:
        raise ConfigError(f"unknown anchor {name!r}; choose from {', '.join(ANCHORS)}")
    return key


@dataclass(frozen=True)
class PlacementSpec:
    anchor: str = "middle-center"
    target_width: int | None = None
    target_height: int | None = None
    intensity: int = 10

    def __post_init__(self):
        object.__setattr__(self, "anchor", normalize_anchor(self.anchor))
        if not 1 <= self.intensity <= 100:
            raise ConfigError(f"intensity must be in [1, 100], got {self.intensity}")
        for dim in (self.target_width, self.target_height):
            if dim is not None and dim < 1:
                raise ConfigError(f"target size must be positive, got {dim}")


def bilinear_resize(img, height, width):
    """Corner-aligned bilinear resampling; the four corner samples are kept."""
    src = np.asarray(img, dtype=np.float64)
    h, w = src.shape[:2]
    rows = np.linspace(0, h - 1, height) if height > 1 else np.zeros(1)
    cols = np.linspace(0, w - 1, width) if width > 1 else np.zeros(1)
    coords = np.meshgrid(rows, cols, indexing="ij")

    def sample(p):
        return ndimage.map_coordinates(p, coords, order=1, mode="nearest")

    if src.ndim == 2:
        return to_uint8(sample(src))
    return to_uint8(np.stack([sample(src[..., k]) for k in range(src.shape[2])], axis=-1))


def fit_size(target_h, target_w, cover_h, cover_w):
    """Shrink ``(target_h, target_w)`` keeping aspect ratio until it fits the cover."""
    scale = min(1.0, cover_h / target_h, cover_w / target_w)
    if scale == 1.0:
        return target_h, target_w
    return max(1, int(target_h * scale)), max(1, int(target_w * scale))


def resize_watermark(wm, spec, cover_shape):
    h, w = wm.shape[:2]
    th = spec.target_height or h
    tw = spec.target_width or w
    th, tw = fit_size(th, tw, cover_shape[0], cover_shape[1])
    if (th, tw) == (h, w):
        return wm
    return bilinear_resize(wm, th, tw)


def align_position(anchor, cover_shape, wm_shape):
    """Top-left pixel offset of the watermark, rounded down to the block grid."""
    anchor = normalize_anchor(anchor)
    ch, cw = cover_shape[:2]
    wh, ww = wm_shape[:2]
    if wh > ch or ww > cw:
        raise DimensionError(f"watermark {wh}x{ww} larger than cover {ch}x{cw}")
    vert, horiz = anchor.split("-")
    free_r, free_c = ch - wh, cw - ww
    row = {"top": 0, "middle": free_r // 2, "bottom": free_r}[vert]
    col = {"left": 0, "center": free_c // 2, "right": free_c}[horiz]
    return row // BLOCK * BLOCK, col // BLOCK * BLOCK


def plan_components(cover, wm):
    if channels(cover) == 3 and channels(wm) == 3:
        return COLOR_ON_COLOR
    if channels(cover) == 3:
        return GRAY_ON_COLOR
    return GRAY_ON_GRAY


def effective_config(cfg, intensity):
    """Scale the top of the beta range by intensity/100."""
    beta_max = cfg.beta_min + (cfg.beta_max - cfg.beta_min) * intensity / 100.0
    return replace(cfg, beta_max=beta_max)


def footprint_blocks(grid_shape, offset, wm_shape):
    """Boolean block mask of cover blocks overlapped by the watermark."""
    by, bx = grid_shape
    r0, c0 = offset[0] // BLOCK, offset[1] // BLOCK
    r1 = -(-(offset[0] + wm_shape[0]) // BLOCK)
    c1 = -(-(offset[1] + wm_shape[1]) // BLOCK)
    mask = np.zeros((by, bx), dtype=bool)
    mask[r0:r1, c0:c1] = True
    return mask


def fuse_plane(cover_plane, wm_plane, offset, cfg, edge=EdgeConfig()):
    """Fuse one watermark component into one cover component.

    The watermark is laid on a zero canvas the size of the extended cover, so
    partially covered blocks see zeros where the logo ends.
    """
    shape = cover_plane.shape
    ext = extend_plane(np.asarray(cover_plane, dtype=np.float64))
    coeffs = dct2d(partition_blocks(ext))

    canvas = np.zeros_like(ext)
    r, c = offset
    wh, ww = wm_plane.shape
    canvas[r : r + wh, c : c + ww] = wm_plane
    wcoeffs = dct2d(partition_blocks(canvas))

    stats, glob = cover_statistics(coeffs, ext, edge)
    alpha, beta = compute_factors(
        stats.mu_prime, stats.sigma_prime, glob.mu_prime, stats.is_edge, cfg
    )
    inside = footprint_blocks(coeffs.shape[:2], offset, wm_plane.shape)
    fused = alpha[..., None, None] * coeffs + beta[..., None, None] * wcoeffs
    coeffs = np.where(inside[..., None, None], fused, coeffs)
    return assemble_plane(idct2d(coeffs))[: shape[0], : shape[1]]


def embed_visible(cover, wm, spec=PlacementSpec(), cfg=FactorConfig(), edge=EdgeConfig()):
    """Return ``cover`` with ``wm`` visibly fused in, same shape and dtype."""
    cover = np.asarray(cover, dtype=np.uint8)
    wm = resize_watermark(np.asarray(wm, dtype=np.uint8), spec, cover.shape)
    offset = align_position(spec.anchor, cover.shape, wm.shape)
    cfg = effective_config(cfg, spec.intensity)
    mode = plan_components(cover, wm)

    if mode == COLOR_ON_COLOR:
        planes = [
            fuse_plane(cover[..., k].astype(np.float64), wm[..., k].astype(np.float64),
                       offset, cfg, edge)
            for k in range(3)
        ]
        return to_uint8(np.stack(planes, axis=-1))
    if mode == GRAY_ON_COLOR:
        y, cb, cr = rgb_to_ycbcr(cover)
        y = fuse_plane(y, wm.astype(np.float64), offset, cfg, edge)
        return ycbcr_to_rgb(y, cb, cr)
    plane = fuse_plane(cover.astype(np.float64), to_gray(wm).astype(np.float64),
                       offset, cfg, edge)
    return to_uint8(plane)
