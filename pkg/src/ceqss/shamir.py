"""Shamir threshold sharing over a prime field Z_p."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class ShamirShare:
    index: int
    value: int


def _check_params(t: int, n: int, p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if not 1 <= t <= n < p:
        raise ValueError(f"need 1 <= t <= n < p, got t={t}, n={n}, p={p}")


def evaluate(coeffs: Sequence[int], x: int, p: int) -> int:
    """Horner evaluation of ``sum(c_k x^k)`` mod p."""
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def shares_from_coefficients(coeffs: Sequence[int], n: int, p: int) -> list[ShamirShare]:
    return [ShamirShare(i, evaluate(coeffs, i, p)) for i in range(1, n + 1)]


def shamir_split(secret: int, t: int, n: int, p: int,
                 rng: np.random.Generator) -> list[ShamirShare]:
    _check_params(t, n, p)
    if not 0 <= secret < p:
        raise ValueError(f"secret {secret} not in Z_{p}")
    coeffs = [secret] + [int(c) for c in rng.integers(0, p, size=t - 1)]
    return shares_from_coefficients(coeffs, n, p)


def shamir_reconstruct(shares: Sequence[ShamirShare], t: int, p: int) -> int:
    """Lagrange interpolation at zero."""
    if len(shares) < t:
        raise ValueError(f"need at least {t} shares, got {len(shares)}")
    xs = [s.index % p for s in shares]
    if len(set(xs)) != len(xs):
        raise ValueError("duplicate share indices")
    if 0 in xs:
        raise ValueError("share index must be non-zero")
    total = 0
    for i, si in enumerate(shares):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = num * xj % p
                den = den * (xj - xs[i]) % p
        total = (total + si.value * num * pow(den, -1, p)) % p
    return total
