"""Sharing built from certified-deletion ciphertexts.

Bitwise scheme: party ``i`` holds an encryption of secret bit ``b_i``; the
secret is the concatenation, so every absent party halves the success
probability, and each party's deletion certificate is checked separately.

Threshold extension: Shamir shares over ``Z_p`` are wrapped in qudit
ciphertexts of radix ``p``.  It supports revocation but, unlike the bitwise
scheme, gives no collaboration incentive beyond the threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

import numpy as np

from .adversary import CdParty, ResponseKind, Strategy, apply_strategy
from .cdpke import CDCiphertext, CDRecord, ThetaPolicy, Verdict, cd_decrypt, cd_encrypt, cd_verify
from .cipher import CipherKey, generate_key
from .quantum import DigitString, split_rng
from .shamir import ShamirShare, is_prime, shamir_reconstruct, shamir_split


@dataclass
class CdDeal:
    n: int
    secret: DigitString
    ciphertexts: list[CDCiphertext]
    keys: list[CipherKey]
    records: list[CDRecord]


@dataclass
class RevocationReport:
    verdicts: dict[int, Verdict]
    revoked: Optional[bool] = None

    @property
    def rejected(self) -> set[int]:
        return {p for p, v in self.verdicts.items() if v is Verdict.REJECTED}


def _wrap(payloads: list[int], m: int, d: int, rng: np.random.Generator,
          policy: ThetaPolicy) -> tuple[list[CDCiphertext], list[CipherKey], list[CDRecord]]:
    # one child stream per party keeps each party's material independent of the others' payloads
    cts, keys, recs = [], [], []
    for payload, child in zip(payloads, split_rng(rng, len(payloads))):
        key = generate_key(child)
        ct, rec = cd_encrypt(payload, m, d, key, child, policy)
        cts.append(ct)
        keys.append(key)
        recs.append(rec)
    return cts, keys, recs


def cd_deal(secret: DigitString, m: int, rng: np.random.Generator,
            policy: ThetaPolicy = ThetaPolicy.BALANCED) -> CdDeal:
    if secret.radix != 2:
        raise ValueError("secret must be a binary string")
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    cts, keys, recs = _wrap(list(secret.digits), m, 2, rng, policy)
    return CdDeal(len(secret), secret, cts, keys, recs)


def _quorum(present: Iterable[int], n: int) -> list[int]:
    present = sorted(set(present))
    if not present:
        raise ValueError("empty quorum")
    if present[0] < 0 or present[-1] >= n:
        raise ValueError(f"party id out of range for {n} parties")
    return present


def cd_reconstruct(deal: CdDeal, present: Iterable[int],
                   rng: np.random.Generator) -> tuple[DigitString, bool]:
    present = _quorum(present, deal.n)
    bits = [int(c) for c in rng.integers(0, 2, size=deal.n)]
    for p in present:
        bits[p] = cd_decrypt(deal.ciphertexts[p], deal.keys[p], rng)
    guess = DigitString(tuple(bits), 2)
    return guess, guess == deal.secret


def _collect_verdicts(cts, keys, recs, parties, behaviors, rng) -> dict[int, Verdict]:
    verdicts = {}
    for p, child in zip(parties, split_rng(rng, len(parties))):
        strategy = Strategy(behaviors.get(p, Strategy.HONEST))
        resp = apply_strategy(strategy, CdParty(cts[p], keys[p]), child)
        if resp.kind is ResponseKind.REFUSAL:
            verdicts[p] = Verdict.REJECTED
        else:
            verdicts[p] = cd_verify(recs[p], resp.certificate)
    return verdicts


def cd_revoke(deal: CdDeal, behaviors: Mapping[int, Strategy],
              rng: np.random.Generator) -> RevocationReport:
    """Ask every party for a deletion certificate and check each one."""
    parties = list(range(deal.n))
    return RevocationReport(_collect_verdicts(deal.ciphertexts, deal.keys, deal.records,
                                              parties, behaviors, rng))


# ---------------------------------------------------------------------------
# (t, n) revocable threshold extension
# ---------------------------------------------------------------------------


@dataclass
class ThresholdDeal:
    p: int
    t: int
    n: int
    secret: int
    shares: list[ShamirShare]
    ciphertexts: list[CDCiphertext]
    keys: list[CipherKey]
    records: list[CDRecord] = field(repr=False)

    @property
    def revocation_quota(self) -> int:
        """Accepted certificates needed to leave fewer than ``t`` intact shares."""
        return self.n - self.t + 1


def threshold_deal(secret: int, t: int, n: int, p: int, m: int, rng: np.random.Generator,
                   policy: ThetaPolicy = ThetaPolicy.BALANCED) -> ThresholdDeal:
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if not 1 < t <= n < p:
        raise ValueError(f"need 1 < t <= n < p, got t={t}, n={n}, p={p}")
    split_stream, wrap_stream = split_rng(rng, 2)
    shares = shamir_split(secret, t, n, p, split_stream)
    cts, keys, recs = _wrap([s.value for s in shares], m, p, wrap_stream, policy)
    return ThresholdDeal(p, t, n, secret, shares, cts, keys, recs)


def threshold_reconstruct(deal: ThresholdDeal, present: Iterable[int],
                          rng: np.random.Generator) -> tuple[int, bool]:
    """Present parties decrypt their shares and interpolate.

    With fewer than ``t`` shares the value is a uniform guess over ``Z_p``.
    """
    present = _quorum(present, deal.n)
    opened = [ShamirShare(deal.shares[q].index, cd_decrypt(deal.ciphertexts[q], deal.keys[q], rng))
              for q in present]
    if len(opened) >= deal.t:
        value = shamir_reconstruct(opened, deal.t, deal.p)
    else:
        value = int(rng.integers(0, deal.p))
    return value, value == deal.secret


def threshold_revoke(deal: ThresholdDeal, responders: Iterable[int],
                     behaviors: Mapping[int, Strategy], rng: np.random.Generator) -> RevocationReport:
    responders = _quorum(responders, deal.n)
    if len(responders) < deal.t:
        raise ValueError(f"need at least t={deal.t} responders, got {len(responders)}")
    verdicts = _collect_verdicts(deal.ciphertexts, deal.keys, deal.records, responders, behaviors, rng)
    accepted = sum(v is Verdict.ACCEPTED for v in verdicts.values())
    return RevocationReport(verdicts, revoked=accepted >= deal.revocation_quota)
