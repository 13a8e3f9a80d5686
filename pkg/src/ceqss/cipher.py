"""Reference authenticated cipher for the classical half of a ciphertext.

This is a stand-in with an ideal-cipher contract (round trip, nonce binding,
detectable forgery), built from a BLAKE2b keystream and an HMAC-SHA256 tag.
It is not a post-quantum public-key scheme and makes no claim to be one.
"""

from __future__ import annotations

import hashlib
import hmac
import struct
from dataclasses import dataclass

import numpy as np

KEY_SIZE = 32
NONCE_SIZE = 16
TAG_SIZE = 32


class AuthenticationError(ValueError):
    """Wrong key or tampered ciphertext."""


@dataclass(frozen=True)
class CipherKey:
    material: bytes
    key_id: str

    def __post_init__(self):
        if len(self.material) < 16:
            raise ValueError("key material must be at least 128 bits")

    def __repr__(self) -> str:
        return f"CipherKey(key_id={self.key_id!r})"


def generate_key(rng: np.random.Generator) -> CipherKey:
    material = rng.bytes(KEY_SIZE)
    return CipherKey(material, hashlib.blake2b(material, digest_size=8).hexdigest())


def _keystream(key: bytes, nonce: bytes, length: int) -> bytes:
    out = bytearray()
    counter = 0
    while len(out) < length:
        out += hashlib.blake2b(nonce + struct.pack(">Q", counter), key=key[:64]).digest()
        counter += 1
    return bytes(out[:length])


def _tag(key: bytes, nonce: bytes, body: bytes) -> bytes:
    mac_key = hashlib.blake2b(b"ceqss-tag", key=key[:64], digest_size=32).digest()
    return hmac.new(mac_key, nonce + body, hashlib.sha256).digest()


def cipher_encrypt(key: CipherKey, plaintext: bytes, nonce: bytes) -> bytes:
    """Returns ``nonce || body || tag``; deterministic in (key, nonce, plaintext)."""
    if len(nonce) != NONCE_SIZE:
        raise ValueError(f"nonce must be {NONCE_SIZE} bytes")
    stream = _keystream(key.material, nonce, len(plaintext))
    body = bytes(a ^ b for a, b in zip(plaintext, stream))
    return nonce + body + _tag(key.material, nonce, body)


def cipher_decrypt(key: CipherKey, ciphertext: bytes) -> bytes:
    if len(ciphertext) < NONCE_SIZE + TAG_SIZE:
        raise AuthenticationError("ciphertext too short")
    nonce = ciphertext[:NONCE_SIZE]
    body = ciphertext[NONCE_SIZE:-TAG_SIZE]
    tag = ciphertext[-TAG_SIZE:]
    if not hmac.compare_digest(tag, _tag(key.material, nonce, body)):
        raise AuthenticationError("authentication failed: wrong key or tampered ciphertext")
    stream = _keystream(key.material, nonce, len(body))
    return bytes(a ^ b for a, b in zip(body, stream))
