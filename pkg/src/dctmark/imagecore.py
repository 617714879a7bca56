"""Image I/O, color conversion, block partitioning and the 8x8 DCT.

Images are plain numpy arrays: ``uint8`` of shape ``(H, W)`` for gray or
``(H, W, 3)`` for RGB. Planes are ``float64`` arrays of shape ``(H, W)``.
Block grids are ``(blocks_y, blocks_x, 8, 8)`` arrays; flattening the first
two axes gives raster-scan block order.
"""
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError
from scipy.fft import dctn, idctn

from .errors import DimensionError, GrayImageError, ImageError

BLOCK = 8

SUPPORTED_FORMATS = {"PNG", "BMP", "JPEG"}

# Full-range BT.601 (JFIF). Rows give Y, Cb, Cr from R, G, B.
_KR, _KG, _KB = 0.299, 0.587, 0.114
RGB_TO_YCBCR = np.array(
    [
        [_KR, _KG, _KB],
        [-0.5 * _KR / (1 - _KB), -0.5 * _KG / (1 - _KB), 0.5],
        [0.5, -0.5 * _KG / (1 - _KR), -0.5 * _KB / (1 - _KR)],
    ]
)
YCBCR_TO_RGB = np.linalg.inv(RGB_TO_YCBCR)
_CHROMA_OFFSET = np.array([0.0, 128.0, 128.0])


def channels(img):
    return 1 if img.ndim == 2 else img.shape[2]


def load_image(path):
    """Decode a PNG, BMP or JPEG file into an 8-bit array.

    Gray files (and palette files without color) give a 2-D array; everything
    else is converted to RGB, dropping any alpha channel.
    """
    path = Path(path)
    if not path.is_file():
        raise ImageError(path, "unreadable: no such file")
    try:
        with Image.open(path) as im:
            fmt = im.format
            if fmt not in SUPPORTED_FORMATS:
                raise ImageError(path, f"unsupported format {fmt!r}")
            im.load()
            if im.mode in ("1", "L", "I", "I;16", "F", "LA"):
                im = im.convert("L")
            else:
                im = im.convert("RGB")
            return np.asarray(im, dtype=np.uint8).copy()
    except ImageError:
        raise
    except (UnidentifiedImageError, OSError, SyntaxError, ValueError) as exc:
        raise ImageError(path, f"unreadable: {exc}") from exc


def save_image(img, path):
    """Write ``img`` losslessly as PNG regardless of the file suffix."""
    img = np.asarray(img)
    if img.dtype != np.uint8:
        raise DimensionError(f"expected uint8 samples, got {img.dtype}")
    try:
        Image.fromarray(img).save(path, format="PNG")
    except OSError as exc:
        raise ImageError(path, f"cannot write: {exc}") from exc


def to_uint8(values):
    """Round half-up and clamp to [0, 255]."""
    return np.clip(np.floor(np.asarray(values, dtype=np.float64) + 0.5), 0, 255).astype(
        np.uint8
    )


def rgb_to_ycbcr(img):
    if channels(img) != 3:
        raise GrayImageError("image has one channel; use it as the intensity plane")
    ycc = img.astype(np.float64) @ RGB_TO_YCBCR.T + _CHROMA_OFFSET
    return ycc[..., 0].copy(), ycc[..., 1].copy(), ycc[..., 2].copy()


def ycbcr_to_rgb(y, cb, cr):
    y, cb, cr = (np.asarray(p, dtype=np.float64) for p in (y, cb, cr))
    if not (y.shape == cb.shape == cr.shape):
        raise DimensionError(f"plane shapes differ: {y.shape}, {cb.shape}, {cr.shape}")
    ycc = np.stack([y, cb, cr], axis=-1) - _CHROMA_OFFSET
    return to_uint8(ycc @ YCBCR_TO_RGB.T)


def to_gray(img):
    """Luma of an RGB image as uint8; gray images pass through."""
    if channels(img) == 1:
        return img
    return to_uint8(rgb_to_ycbcr(img)[0])


def extend_plane(plane):
    """Pad bottom/right by edge replication up to multiples of 8."""
    h, w = plane.shape
    pad_h = -h % BLOCK
    pad_w = -w % BLOCK
    if pad_h == 0 and pad_w == 0:
        return plane
    return np.pad(plane, ((0, pad_h), (0, pad_w)), mode="edge")


def partition_blocks(plane):
    h, w = plane.shape
    if h % BLOCK or w % BLOCK:
        raise DimensionError(f"plane {h}x{w} is not a multiple of {BLOCK}")
    return plane.reshape(h // BLOCK, BLOCK, w // BLOCK, BLOCK).swapaxes(1, 2).copy()


def assemble_plane(grid):
    by, bx = grid.shape[:2]
    return grid.swapaxes(1, 2).reshape(by * BLOCK, bx * BLOCK).copy()


def dct2d(blocks):
    """Orthonormal 2-D DCT-II over the last two axes."""
    return dctn(np.asarray(blocks, dtype=np.float64), type=2, norm="ortho", axes=(-2, -1))


def idct2d(coeffs):
    return idctn(np.asarray(coeffs, dtype=np.float64), type=2, norm="ortho", axes=(-2, -1))


def plane_to_dct(plane):
    """Extend, partition and transform a plane in one step."""
    return dct2d(partition_blocks(extend_plane(np.asarray(plane, dtype=np.float64))))


def dct_to_plane(coeffs, shape):
    """Inverse of :func:`plane_to_dct`, cropped back to ``shape``."""
    plane = assemble_plane(idct2d(coeffs))
    return plane[: shape[0], : shape[1]]
