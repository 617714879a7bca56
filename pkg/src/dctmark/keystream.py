"""Passphrase-keyed bit keystream (AES-256 in counter mode)."""
import hashlib

import numpy as np
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .errors import InvalidKeyError

KEY_MIN_LEN = 6
KEY_MAX_LEN = 56

_NONCE = bytes(16)


def check_key(passphrase):
    if not isinstance(passphrase, str):
        raise InvalidKeyError("key must be a string")
    if not KEY_MIN_LEN <= len(passphrase) <= KEY_MAX_LEN:
        raise InvalidKeyError(
            f"key must be {KEY_MIN_LEN}-{KEY_MAX_LEN} characters, got {len(passphrase)}"
        )
    return passphrase


def derive_key(passphrase):
    """SHA-256 of the UTF-8 passphrase, used as the AES-256 key."""
    return hashlib.sha256(check_key(passphrase).encode("utf-8")).digest()


def keystream_bits(passphrase, n):
    """First ``n`` keystream bits as a uint8 array of 0/1."""
    nbytes = -(-n // 8)
    enc = Cipher(algorithms.AES(derive_key(passphrase)), modes.CTR(_NONCE)).encryptor()
    raw = enc.update(bytes(nbytes)) + enc.finalize()
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8))[:n]


def encrypt_watermark(bits, passphrase):
    """XOR a bit array (any shape, C order) with the keystream.

    Applying it twice with the same key gives back the input.
    """
    bits = np.asarray(bits, dtype=np.uint8)
    if bits.size and bits.max() > 1:
        raise ValueError("watermark must contain only 0 and 1")
    ks = keystream_bits(passphrase, bits.size).reshape(bits.shape)
    return bits ^ ks
