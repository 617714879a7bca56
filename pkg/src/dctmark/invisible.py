"""Key-encrypted invisible watermark in the four lowest DCT terms of each block.

Every cover block ``k`` carries one 2x2 sub-block of the (encrypted, zero
padded) binary watermark. A bit of 1 scales its coefficient by ``1 + a``, a
bit of 0 by ``1 - a``, with ``a = alpha_dc`` at DC and ``alpha_ac`` at
(0,1), (1,0) and (1,1). Extraction is non-blind: the bit is read off by
whether the coefficient magnitude grew relative to the original cover.
"""
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, ConfigError, DimensionError
from .imagecore import (
    BLOCK,
    assemble_plane,
    channels,
    dct2d,
    extend_plane,
    idct2d,
    partition_blocks,
    rgb_to_ycbcr,
    to_gray,
    to_uint8,
    ycbcr_to_rgb,
)
from .keystream import check_key, encrypt_watermark

SUB = 2
# Minimum coefficient change alpha_ij * |c_ij| for a position to carry a bit.
SKIP_THRESHOLD = 4.0
AUTH_THRESHOLD = 0.85
MIN_RELIABLE = 64


@dataclass(frozen=True)
class AlphaConfig:
    alpha_dc: float = 0.02
    alpha_ac: float = 0.1

    def __post_init__(self):
        for name in ("alpha_dc", "alpha_ac"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ConfigError(f"{name} must lie in (0, 1), got {value}")

    def matrix(self):
        return np.array(
            [[self.alpha_dc, self.alpha_ac], [self.alpha_ac, self.alpha_ac]]
        )


@dataclass(frozen=True)
class AuthDecision:
    match_fraction: float
    reliable_count: int
    threshold: float
    authentic: bool

    @property
    def verdict(self):
        return "authentic" if self.authentic else "not-authentic"


def binarize(img, level=128):
    """Gray or RGB image to a 0/1 uint8 matrix (1 where luma >= level)."""
    return (to_gray(img) >= level).astype(np.uint8)


def capacity(shape):
    """Payload bits a cover of ``shape`` (H, W[, C]) can hold."""
    h, w = shape[:2]
    return SUB * SUB * (-(-h // BLOCK)) * (-(-w // BLOCK))


def pack_payload(bits, n_blocks):
    """Split a bit matrix into 2x2 sub-blocks in raster order and zero-pad.

    Returns a ``(n_blocks, 2, 2)`` array; sub-block ``k`` goes to cover
    block ``k``. Odd dimensions are padded with a zero row/column first.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.ndim != 2:
        raise DimensionError(f"watermark must be a 2-D bit matrix, got shape {bits.shape}")
    bits = np.pad(bits, ((0, bits.shape[0] % SUB), (0, bits.shape[1] % SUB)))
    h, w = bits.shape
    subs = bits.reshape(h // SUB, SUB, w // SUB, SUB).swapaxes(1, 2).reshape(-1, SUB, SUB)
    if len(subs) > n_blocks:
        raise CapacityError(bits.size, SUB * SUB * n_blocks)
    out = np.zeros((n_blocks, SUB, SUB), dtype=np.uint8)
    out[: len(subs)] = subs
    return out


def encrypted_payload(bits, passphrase, n_blocks):
    return encrypt_watermark(pack_payload(bits, n_blocks), passphrase)


def _working_plane(img):
    if channels(img) == 1:
        return img.astype(np.float64), None
    y, cb, cr = rgb_to_ycbcr(img)
    return y, (cb, cr)


def _decompose(plane):
    """Spatial and DCT blocks of the extended plane, flattened to raster order."""
    blocks = partition_blocks(extend_plane(plane))
    grid = blocks.shape[:2]
    blocks = blocks.reshape((-1, BLOCK, BLOCK))
    return blocks, dct2d(blocks), grid


def _interior_blocks(shape, grid):
    """Blocks fully inside the image; padded border blocks do not survive cropping."""
    h, w = shape
    by, bx = grid
    rows = (np.arange(by) + 1) * BLOCK <= h
    cols = (np.arange(bx) + 1) * BLOCK <= w
    return (rows[:, None] & cols[None, :]).reshape(-1)


def _basis_peaks():
    peaks = np.zeros((SUB, SUB))
    for i in range(SUB):
        for j in range(SUB):
            unit = np.zeros((BLOCK, BLOCK))
            unit[i, j] = 1.0
            peaks[i, j] = np.abs(idct2d(unit)).max()
    return peaks


_BASIS_PEAK = _basis_peaks()


def reliable_mask(blocks, coeffs, shape, grid, cfg=AlphaConfig(), skip=SKIP_THRESHOLD):
    """``(M_block, 2, 2)`` mask of positions that carry a readable bit.

    A position qualifies when its embedding step ``alpha_ij * |c_ij|`` is at
    least ``skip``. Whole blocks are dropped when the worst-case pixel swing
    could push them outside [0, 255], and so are padded border blocks. The
    mask depends only on the original cover, so embedder and extractor agree.
    """
    step = np.abs(coeffs[:, :SUB, :SUB]) * cfg.matrix()
    mask = step >= skip
    swing = (np.where(mask, step, 0.0) * _BASIS_PEAK).sum(axis=(1, 2))
    in_range = (blocks.min(axis=(1, 2)) - swing >= 0) & (blocks.max(axis=(1, 2)) + swing <= 255)
    keep = in_range & _interior_blocks(shape, grid)
    return mask & keep[:, None, None]


def modulate(coeffs, payload, mask, cfg=AlphaConfig()):
    """Scale the 2x2 low-frequency corner of each block in place.

    Bit 1 multiplies by ``1 + alpha_ij``, bit 0 by ``1 - alpha_ij``; masked-out
    positions are untouched.
    """
    sign = np.where(np.asarray(payload) == 1, 1.0, -1.0)
    coeffs[..., :SUB, :SUB] *= np.where(mask, 1.0 + sign * cfg.matrix(), 1.0)
    return coeffs


def embed_invisible(cover, bits, passphrase, cfg=AlphaConfig(), skip=SKIP_THRESHOLD):
    """Embed a binary watermark into ``cover`` and return the marked uint8 image."""
    check_key(passphrase)
    plane, chroma = _working_plane(cover)
    blocks, coeffs, grid = _decompose(plane)
    payload = encrypted_payload(bits, passphrase, len(coeffs))
    mask = reliable_mask(blocks, coeffs, plane.shape, grid, cfg, skip)

    modulate(coeffs, payload, mask, cfg)

    spatial = idct2d(coeffs).reshape(grid + (BLOCK, BLOCK))
    marked = assemble_plane(spatial)[: plane.shape[0], : plane.shape[1]]
    if chroma is None:
        return to_uint8(marked)
    return ycbcr_to_rgb(marked, *chroma)


def extract_bits(suspect, original, cfg=AlphaConfig(), skip=SKIP_THRESHOLD):
    """Read the raw (still encrypted) payload.

    Returns ``(bits, reliable)``, both ``(M_block, 2, 2)``. A bit is 1 when
    the suspect coefficient moved away from zero relative to the original,
    which handles negative coefficients the same way as positive ones.
    """
    if suspect.shape != original.shape:
        raise DimensionError(
            f"suspect {suspect.shape} and original {original.shape} differ in shape"
        )
    ref_plane, _ = _working_plane(original)
    sus_plane, _ = _working_plane(suspect)
    ref_blocks, ref, grid = _decompose(ref_plane)
    _, sus, _ = _decompose(sus_plane)
    c = ref[:, :SUB, :SUB]
    s = np.sign(c)
    bits = (sus[:, :SUB, :SUB] * s > c * s).astype(np.uint8)
    return bits, reliable_mask(ref_blocks, ref, ref_plane.shape, grid, cfg, skip)


def extract_watermark(
    suspect,
    original,
    expected_bits,
    passphrase,
    cfg=AlphaConfig(),
    skip=SKIP_THRESHOLD,
    threshold=AUTH_THRESHOLD,
    min_reliable=MIN_RELIABLE,
):
    """Compare the extracted payload with the expected encrypted watermark."""
    check_key(passphrase)
    bits, reliable = extract_bits(suspect, original, cfg, skip)
    expected = encrypted_payload(expected_bits, passphrase, len(bits))
    count = int(reliable.sum())
    match = float((bits == expected)[reliable].mean()) if count else 0.0
    ok = count >= min_reliable and match >= threshold
    return AuthDecision(match, count, threshold, ok)
