"""Encryption with certified deletion over qubits and qudits.

A digit ``b`` in ``Z_d`` is hidden behind a random conjugate-coded register
``|x>_theta`` and a classical ciphertext of ``theta`` plus the masked payload
``(b + sum of x_i where theta_i == 0) mod d``.  At ``d == 2`` the mask is the
XOR of those bits.

Measuring the register in the Fourier basis yields a deletion certificate: the
outcomes at ``theta_i == 1`` positions must reproduce ``x_i``, while the
outcomes at ``theta_i == 0`` positions are uniform and the mask is lost.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .cipher import CipherKey, cipher_decrypt, cipher_encrypt, NONCE_SIZE
from .quantum import (
    Basis,
    ConsumedError,
    DigitString,
    ProductState,
    encode_product,
    measure_sites,
)

MAX_RADIX = 256  # digits travel one per byte


class ThetaPolicy(enum.Enum):
    BALANCED = "balanced"  # exactly ceil(m/2) Fourier positions
    IID = "iid"  # uniform bits, resampled while all-equal


class Verdict(enum.Enum):
    ACCEPTED = "accepted"
    REJECTED = "rejected"


@dataclass(frozen=True)
class CDRecord:
    """What the dealer keeps to check a deletion certificate."""

    x: DigitString
    theta: DigitString
    key: CipherKey
    payload: int

    def __post_init__(self):
        if len(self.x) != len(self.theta):
            raise ValueError("x and theta lengths differ")
        if 0 not in self.theta.digits or 1 not in self.theta.digits:
            raise ValueError("theta needs at least one 0 and one 1")

    @property
    def m(self) -> int:
        return len(self.x)

    @property
    def radix(self) -> int:
        return self.x.radix

    @property
    def hadamard_positions(self) -> tuple[int, ...]:
        return tuple(i for i, t in enumerate(self.theta) if t == 1)


@dataclass
class CDCiphertext:
    """Quantum register plus the opaque classical part.

    The register can be measured once by each protocol action: one decryption
    (computational basis) and one deletion (Fourier basis).  The collapsed
    register stays in place after either, so a receiver who decrypts early
    still has something to answer a deletion request with.
    """

    quantum: ProductState
    classical: bytes
    m: int
    d: int
    decrypted: bool = False
    deleted: bool = False

    @property
    def consumed(self) -> bool:
        return self.deleted


@dataclass(frozen=True)
class DeletionCertificate:
    outcomes: DigitString

    def __len__(self) -> int:
        return len(self.outcomes)


def sample_theta(m: int, rng: np.random.Generator,
                 policy: ThetaPolicy = ThetaPolicy.BALANCED) -> DigitString:
    if m < 2:
        raise ValueError(f"need at least 2 sites, got m={m}")
    if policy is ThetaPolicy.BALANCED:
        bits = np.zeros(m, dtype=int)
        bits[rng.permutation(m)[: math.ceil(m / 2)]] = 1
        return DigitString(tuple(bits.tolist()), 2)
    while True:
        bits = rng.integers(0, 2, size=m)
        if 0 < bits.sum() < m:
            return DigitString(tuple(bits.tolist()), 2)


def mask_value(x: DigitString, theta: DigitString) -> int:
    """Sum of the computationally encoded digits of ``x``, mod its radix."""
    return sum(xi for xi, ti in zip(x, theta) if ti == 0) % x.radix


def _encode_plaintext(theta: DigitString, masked: int) -> bytes:
    return bytes(theta.digits) + bytes([masked])


def _decode_plaintext(plain: bytes, m: int, d: int) -> tuple[DigitString, int]:
    if len(plain) != m + 1:
        raise ValueError(f"classical payload has {len(plain)} bytes, expected {m + 1}")
    return DigitString(tuple(plain[:m]), 2), DigitString((plain[m],), d).digits[0]


def cd_encrypt(b: int, m: int, d: int, key: CipherKey, rng: np.random.Generator,
               policy: ThetaPolicy = ThetaPolicy.BALANCED) -> tuple[CDCiphertext, CDRecord]:
    if not 2 <= d <= MAX_RADIX:
        raise ValueError(f"radix must be in [2, {MAX_RADIX}], got {d}")
    if not 0 <= b < d:
        raise ValueError(f"payload {b} out of range for radix {d}")
    if m < 2:
        raise ValueError(f"need at least 2 sites, got m={m}")
    x = DigitString(tuple(rng.integers(0, d, size=m).tolist()), d)
    theta = sample_theta(m, rng, policy)
    masked = (b + mask_value(x, theta)) % d
    classical = cipher_encrypt(key, _encode_plaintext(theta, masked), rng.bytes(NONCE_SIZE))
    ct = CDCiphertext(encode_product(x, theta, d), classical, m, d)
    return ct, CDRecord(x, theta, key, b)


def open_classical(ct: CDCiphertext, key: CipherKey) -> tuple[DigitString, int]:
    """Decrypt the classical part to ``(theta, masked payload)``."""
    return _decode_plaintext(cipher_decrypt(key, ct.classical), ct.m, ct.d)


def cd_decrypt(ct: CDCiphertext, key: CipherKey, rng: np.random.Generator) -> int:
    theta, masked = open_classical(ct, key)
    if ct.decrypted:
        raise ConsumedError("ciphertext register was already measured for decryption")
    outcome, ct.quantum = measure_sites(ct.quantum, range(ct.m), Basis.COMPUTATIONAL, rng)
    ct.decrypted = True
    return (masked - mask_value(outcome, theta)) % ct.d


def cd_delete(ct: CDCiphertext, rng: np.random.Generator) -> DeletionCertificate:
    if ct.deleted:
        raise ConsumedError("ciphertext register was already deleted")
    outcome, ct.quantum = measure_sites(ct.quantum, range(ct.m), Basis.FOURIER, rng)
    ct.deleted = True
    return DeletionCertificate(outcome)


def cd_verify(rec: CDRecord, cert: DeletionCertificate) -> Verdict:
    if len(cert) != rec.m:
        raise ValueError(f"certificate has {len(cert)} digits, expected {rec.m}")
    if cert.outcomes.radix != rec.radix:
        raise ValueError("certificate radix mismatch")
    ok = all(cert.outcomes[i] == rec.x[i] for i in rec.hadamard_positions)
    return Verdict.ACCEPTED if ok else Verdict.REJECTED
