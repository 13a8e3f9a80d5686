"""Unconditionally secure sharing on a GHZ-like state.

The dealer prepares ``(|x> + |x_bar>)/sqrt(2)`` and hands qubit ``i`` to party
``i``.  ``x`` and its negation encode the same secret; the canonical codeword
has a leading 0, so an ``n``-party deal carries an ``(n-1)``-bit secret.

Any early computational-basis measurement collapses the register onto ``|x>``
or ``|x_bar>``; the dealer's seal check then sees the minus-superposition half
the time.  The verdict says only *that* someone cheated, never who.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .quantum import (
    Basis,
    CheckResult,
    ConsumedError,
    DigitString,
    PureState,
    ghz_like,
    measure_sites,
    projective_check,
)

MAX_PARTIES = 20


class SealVerdict(enum.Enum):
    HONEST = "honest"
    CHEAT_DETECTED = "cheat-detected"


def encode_secret(s: DigitString, r: int) -> DigitString:
    """Codeword for secret ``s``: ``0||s`` for coin 0, its negation for coin 1."""
    if s.radix != 2:
        raise ValueError("secret must be binary")
    x = DigitString((0,) + s.digits, 2)
    return x.negate() if r else x


def decode_codeword(y: DigitString) -> DigitString:
    if len(y) < 2:
        raise ValueError("codeword needs at least 2 bits")
    if y[0] == 1:
        y = y.negate()
    return DigitString(y.digits[1:], 2)


@dataclass
class GhzDeal:
    n: int
    codeword: DigitString
    joint: PureState
    custody: dict[int, int] = field(default_factory=dict)
    consumed: bool = False

    @property
    def secret(self) -> DigitString:
        return decode_codeword(self.codeword)

    def sites_of(self, parties: Iterable[int]) -> list[int]:
        try:
            return [self.custody[p] for p in parties]
        except KeyError as exc:
            raise ValueError(f"unknown party {exc.args[0]}") from None

    def _require_live(self) -> None:
        if self.consumed:
            raise ConsumedError("deal already consumed")


def deal(s: DigitString, rng: np.random.Generator) -> GhzDeal:
    n = len(s) + 1
    if not 2 <= n <= MAX_PARTIES:
        raise ValueError(f"party count {n} outside [2, {MAX_PARTIES}]")
    x = encode_secret(s, int(rng.integers(0, 2)))
    return GhzDeal(n, x, ghz_like(x), {i: i for i in range(n)})


def _guess_missing(k: int, rng: np.random.Generator) -> list[int]:
    return [int(v) for v in rng.integers(0, 2, size=k)]


def reconstruct(deal: GhzDeal, present: Iterable[int],
                rng: np.random.Generator) -> tuple[DigitString, bool]:
    """Present parties measure; absent positions are guessed uniformly."""
    present = sorted(set(present))
    if not present:
        raise ValueError("empty quorum")
    deal._require_live()
    sites = deal.sites_of(present)
    outcome, deal.joint = measure_sites(deal.joint, sites, Basis.COMPUTATIONAL, rng)
    deal.consumed = True

    bits = [0] * deal.n
    for site, bit in zip(sorted(sites), outcome):
        bits[site] = bit
    missing = sorted(set(range(deal.n)) - set(sites))
    for site, bit in zip(missing, _guess_missing(len(missing), rng)):
        bits[site] = bit
    guess = decode_codeword(DigitString(tuple(bits), 2))
    return guess, guess == deal.secret


def cheat_measure_early(deal: GhzDeal, cheaters: Iterable[int],
                        rng: np.random.Generator) -> DigitString:
    """Cheaters read their qubits before the unseal event; the deal stays returnable."""
    cheaters = sorted(set(cheaters))
    if not cheaters:
        raise ValueError("empty cheater set")
    deal._require_live()
    outcome, deal.joint = measure_sites(deal.joint, deal.sites_of(cheaters), Basis.COMPUTATIONAL, rng)
    return outcome


def seal_check(deal: GhzDeal, rng: np.random.Generator) -> SealVerdict:
    deal._require_live()
    deal.consumed = True
    result = projective_check(deal.joint, ghz_like(deal.codeword), rng)
    return SealVerdict.HONEST if result is CheckResult.PASS else SealVerdict.CHEAT_DETECTED
