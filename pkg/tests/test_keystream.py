import hashlib

import numpy as np
import pytest
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from dctmark.errors import InvalidKeyError
from dctmark.keystream import derive_key, encrypt_watermark, keystream_bits

KEY = "correct horse"


def ecb_counter_bits(passphrase, n):
    """CTR keystream rebuilt from single-block AES on explicit counters."""
    key = hashlib.sha256(passphrase.encode()).digest()
    enc = Cipher(algorithms.AES(key), modes.ECB()).encryptor()
    blocks = -(-n // 128)
    raw = b"".join(enc.update(i.to_bytes(16, "big")) for i in range(blocks))
    return np.unpackbits(np.frombuffer(raw, np.uint8))[:n]


def test_key_is_sha256():
    assert derive_key(KEY) == hashlib.sha256(KEY.encode()).digest()


def test_keystream_matches_counter_oracle():
    np.testing.assert_array_equal(keystream_bits(KEY, 1000), ecb_counter_bits(KEY, 1000))


def test_keystream_prefix_stable():
    long = keystream_bits(KEY, 4096)
    np.testing.assert_array_equal(keystream_bits(KEY, 77), long[:77])


def test_zero_mark_gives_keystream():
    zeros = np.zeros((64, 64), np.uint8)
    np.testing.assert_array_equal(encrypt_watermark(zeros, KEY).ravel(),
                                  keystream_bits(KEY, zeros.size))


def test_involution_many_payloads():
    rng = np.random.default_rng(11)
    for i in range(1000):
        bits = rng.integers(0, 2, size=(8, 16), dtype=np.uint8)
        key = f"passphrase-{i}"
        np.testing.assert_array_equal(encrypt_watermark(encrypt_watermark(bits, key), key), bits)


def test_shape_preserved():
    assert encrypt_watermark(np.zeros((3, 5, 2), np.uint8), KEY).shape == (3, 5, 2)


def test_distinct_keys_disagree_half_the_time():
    bits = np.random.default_rng(5).integers(0, 2, size=4096, dtype=np.uint8)
    for i in range(10):
        a = encrypt_watermark(bits, f"key-alpha-{i}")
        b = encrypt_watermark(bits, f"key-beta-{i}")
        assert abs((a != b).mean() - 0.5) <= 0.05


def test_one_character_changes_avalanche():
    bits = np.zeros(4096, np.uint8)
    base = encrypt_watermark(bits, "avalanche-base")
    for pos in range(10):
        tweaked = list("avalanche-base")
        tweaked[pos] = chr(ord(tweaked[pos]) + 1)
        other = encrypt_watermark(bits, "".join(tweaked))
        assert (base != other).mean() >= 0.40


@pytest.mark.parametrize("key", ["", "short", "x" * 57])
def test_bad_key_length(key):
    with pytest.raises(InvalidKeyError):
        encrypt_watermark(np.zeros(4, np.uint8), key)


@pytest.mark.parametrize("key", ["x" * 6, "x" * 56])
def test_key_length_limits_accepted(key):
    encrypt_watermark(np.zeros(4, np.uint8), key)


def test_rejects_non_binary():
    with pytest.raises(ValueError):
        encrypt_watermark(np.array([0, 1, 2]), KEY)
