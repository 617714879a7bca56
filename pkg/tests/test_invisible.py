import math

import numpy as np
import pytest

from dctmark.errors import CapacityError, ConfigError, DimensionError, InvalidKeyError
from dctmark.invisible import (
    AlphaConfig,
    binarize,
    capacity,
    embed_invisible,
    encrypted_payload,
    extract_bits,
    extract_watermark,
    modulate,
    pack_payload,
    reliable_mask,
)
from dctmark.keystream import encrypt_watermark

KEY = "s3cret-pass"


def dct_matrix(n=8):
    m = np.zeros((n, n))
    for u in range(n):
        scale = math.sqrt((1 if u == 0 else 2) / n)
        for x in range(n):
            m[u, x] = scale * math.cos((2 * x + 1) * u * math.pi / (2 * n))
    return m


D = dct_matrix()


def textured(shape, seed=0):
    """Smooth mid-gray texture: strong low-frequency terms, far from clipping."""
    rng = np.random.default_rng(seed)
    h, w = shape[:2]
    y, x = np.mgrid[0:h, 0:w]
    base = 128 + 40 * np.sin(x / 7.0) * np.cos(y / 11.0) + rng.normal(0, 6, size=(h, w))
    base = np.clip(base, 40, 215)
    if len(shape) == 3:
        base = np.stack([base, 0.9 * base + 10, 0.8 * base + 20], axis=-1)
    return np.floor(base + 0.5).astype(np.uint8)


# -- modulation --------------------------------------------------------------

def test_modulate_dc_bit_one():
    c = np.zeros((1, 8, 8))
    c[0, 0, 0] = 1000.0
    modulate(c, np.array([[[1, 0], [0, 0]]]), np.ones((1, 2, 2), bool))
    assert c[0, 0, 0] == pytest.approx(1020.0)


def test_modulate_negative_ac_bit_zero_shrinks_magnitude():
    c = np.zeros((1, 8, 8))
    c[0, 0, 1] = -40.0
    modulate(c, np.zeros((1, 2, 2), np.uint8), np.ones((1, 2, 2), bool))
    assert c[0, 0, 1] == pytest.approx(-36.0)


def test_modulate_leaves_higher_terms_and_masked_positions():
    rng = np.random.default_rng(2)
    c = rng.normal(size=(3, 8, 8)) * 50
    before = c.copy()
    mask = np.zeros((3, 2, 2), bool)
    mask[1, 1, 0] = True
    modulate(c, np.ones((3, 2, 2), np.uint8), mask)
    diff = c != before
    assert diff.sum() == 1 and diff[1, 1, 0]


def test_zero_coefficient_is_unreliable():
    blocks = np.full((1, 8, 8), 128.0)
    coeffs = (D @ blocks[0] @ D.T)[None]
    mask = reliable_mask(blocks, coeffs, (8, 8), (1, 1))
    assert mask[0, 0, 0]  # DC 1024 -> step 20.48
    assert not mask[0, 0, 1] and not mask[0, 1, 0] and not mask[0, 1, 1]


def test_alpha_config_bounds():
    with pytest.raises(ConfigError):
        AlphaConfig(alpha_dc=0.0)
    with pytest.raises(ConfigError):
        AlphaConfig(alpha_ac=1.0)


# -- payload -----------------------------------------------------------------

def test_capacity_512():
    assert capacity((512, 512, 3)) == 16384


def test_pack_raster_order():
    bits = np.arange(16).reshape(4, 4) % 2
    bits[0, 2] = 1
    subs = pack_payload(bits, 6)
    np.testing.assert_array_equal(subs[1], bits[0:2, 2:4])
    np.testing.assert_array_equal(subs[2], bits[2:4, 0:2])
    assert not subs[4:].any()


def test_pack_odd_dimensions_padded():
    subs = pack_payload(np.ones((3, 3), np.uint8), 4)
    np.testing.assert_array_equal(subs[3], [[1, 0], [0, 0]])


def test_capacity_exceeded():
    with pytest.raises(CapacityError) as err:
        pack_payload(np.ones((130, 128), np.uint8), 4096)
    assert err.value.max_bits == 16384


def test_padding_is_encrypted():
    payload = encrypted_payload(np.zeros((2, 2), np.uint8), KEY, 100)
    np.testing.assert_array_equal(payload, encrypt_watermark(np.zeros((100, 2, 2), np.uint8), KEY))


def test_binarize_threshold():
    img = np.array([[0, 127, 128, 255]], np.uint8)
    np.testing.assert_array_equal(binarize(img), [[0, 0, 1, 1]])


# -- embedding against an independent oracle ----------------------------------

def oracle_embed_gray(cover, bits, passphrase, cfg=AlphaConfig(), skip=4.0):
    alphas = cfg.matrix()
    h, w = cover.shape
    out = cover.astype(float).copy()
    payload = encrypt_watermark(pack_payload(bits, (h // 8) * (w // 8)), passphrase)
    k = 0
    for by in range(h // 8):
        for bx in range(w // 8):
            blk = out[by * 8:(by + 1) * 8, bx * 8:(bx + 1) * 8]
            c = D @ blk @ D.T
            step = np.abs(c[:2, :2]) * alphas
            use = step >= skip
            peak = np.array([[np.abs(D.T[:, i][:, None] * D.T[:, j][None, :]).max()
                              for j in range(2)] for i in range(2)])
            swing = (step * use * peak).sum()
            if blk.min() - swing >= 0 and blk.max() + swing <= 255:
                for i in range(2):
                    for j in range(2):
                        if use[i, j]:
                            sgn = 1 if payload[k, i, j] else -1
                            c[i, j] *= 1 + sgn * alphas[i, j]
            blk[:] = D.T @ c @ D
            k += 1
    return np.clip(np.floor(out + 0.5), 0, 255).astype(np.uint8)


def test_gray_embed_matches_oracle():
    cover = textured((64, 48))
    bits = np.random.default_rng(4).integers(0, 2, size=(16, 12), dtype=np.uint8)
    got = embed_invisible(cover, bits, KEY)
    want = oracle_embed_gray(cover, bits, KEY)
    assert np.abs(got.astype(int) - want).max() <= 1
    assert (got != cover).any()


def test_round_trip_gray():
    cover = textured((128, 128))
    bits = np.random.default_rng(8).integers(0, 2, size=(32, 32), dtype=np.uint8)
    marked = embed_invisible(cover, bits, KEY)
    decision = extract_watermark(marked, cover, bits, KEY)
    assert decision.match_fraction >= 0.99
    assert decision.authentic and decision.verdict == "authentic"


def test_round_trip_color_odd_size():
    cover = textured((101, 90, 3), seed=3)
    bits = np.random.default_rng(9).integers(0, 2, size=(20, 22), dtype=np.uint8)
    marked = embed_invisible(cover, bits, KEY)
    assert marked.shape == cover.shape
    decision = extract_watermark(marked, cover, bits, KEY)
    assert decision.match_fraction >= 0.99 and decision.authentic


def test_extracted_payload_decrypts_to_mark():
    cover = textured((64, 64))
    bits = np.random.default_rng(1).integers(0, 2, size=(16, 16), dtype=np.uint8)
    raw, reliable = extract_bits(embed_invisible(cover, bits, KEY), cover)
    plain = encrypt_watermark(raw, KEY)
    expected = pack_payload(bits, len(raw))
    assert reliable.sum() > 0
    np.testing.assert_array_equal(plain[reliable], expected[reliable])


def test_wrong_key_is_chance_level(benchmarks, mark):
    cover = benchmarks["lena"]
    marked = embed_invisible(cover, mark, KEY)
    decision = extract_watermark(marked, cover, mark, "not-the-key")
    assert abs(decision.match_fraction - 0.5) <= 0.06
    assert not decision.authentic


def test_unmarked_suspect_not_authentic():
    cover = textured((128, 128))
    bits = np.ones((32, 32), np.uint8)
    decision = extract_watermark(cover, cover, bits, KEY)
    assert not decision.authentic


def test_too_few_reliable_positions():
    cover = np.full((16, 16), 128, np.uint8)
    bits = np.ones((4, 4), np.uint8)
    decision = extract_watermark(embed_invisible(cover, bits, KEY), cover, bits, KEY)
    assert decision.reliable_count < 64
    assert not decision.authentic


def test_deterministic():
    cover = textured((64, 64, 3))
    bits = np.eye(16, dtype=np.uint8)
    np.testing.assert_array_equal(embed_invisible(cover, bits, KEY), embed_invisible(cover, bits, KEY))


def test_key_changes_output():
    cover = textured((64, 64))
    bits = np.eye(16, dtype=np.uint8)
    assert (embed_invisible(cover, bits, KEY) != embed_invisible(cover, bits, KEY + "x")).any()


def test_shape_mismatch():
    cover = textured((64, 64))
    with pytest.raises(DimensionError):
        extract_watermark(cover[:56], cover, np.ones((4, 4), np.uint8), KEY)


def test_invalid_key():
    with pytest.raises(InvalidKeyError):
        embed_invisible(textured((16, 16)), np.ones((2, 2), np.uint8), "abc")


def test_mask_ignores_border_blocks():
    cover = textured((20, 20))
    plane = cover.astype(float)
    padded = np.pad(plane, ((0, 4), (0, 4)), mode="edge")
    blocks = padded.reshape(3, 8, 3, 8).swapaxes(1, 2).reshape(-1, 8, 8)
    coeffs = np.einsum("ux,bxy,vy->buv", D, blocks, D)
    mask = reliable_mask(blocks, coeffs, (20, 20), (3, 3))
    interior = np.zeros(9, bool)
    interior[[0, 1, 3, 4]] = True
    assert not mask[~interior].any()
