"""Exact protocol probabilities by exhaustive branch enumeration.

Every function here walks all measurement branches (with Born weights from the
simulator's analytic outcome distributions) and every classical coin, and
returns an exact ``Fraction``.  No sampling is involved, so these serve as
oracles for the Monte Carlo paths and as checks against closed forms.
"""

from __future__ import annotations

import itertools
from collections import Counter, defaultdict
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from . import ghz
from .cdpke import CDRecord, DeletionCertificate, Verdict, cd_verify, mask_value
from .cipher import CipherKey
from .quantum import (
    Basis,
    DigitString,
    encode_product,
    ghz_like,
    outcome_distribution,
    outcome_probabilities,
)
from .shamir import ShamirShare, evaluate

_DENOMINATOR_BOUND = 1 << 24


def exact(p: float) -> Fraction:
    """Snap a Born probability to the rational it approximates."""
    q = Fraction(p).limit_denominator(_DENOMINATOR_BOUND)
    if abs(float(q) - p) > 1e-9:
        raise ArithmeticError(f"probability {p!r} has no small rational form")
    return q


def all_strings(length: int, radix: int = 2) -> Iterator[DigitString]:
    for digits in itertools.product(range(radix), repeat=length):
        yield DigitString(digits, radix)


def valid_thetas(m: int) -> list[DigitString]:
    """Every basis string with at least one 0 and one 1."""
    return [th for th in all_strings(m) if 0 < sum(th.digits) < m]


def balanced_thetas(m: int) -> list[DigitString]:
    w = (m + 1) // 2
    return [th for th in all_strings(m) if sum(th.digits) == w]


# ---------------------------------------------------------------------------
# GHZ scheme
# ---------------------------------------------------------------------------


def ghz_success_probability(secret: DigitString, coin: int, missing: Iterable[int]) -> Fraction:
    """P(reconstruction succeeds) with the given parties absent, over all branches."""
    x = ghz.encode_secret(secret, coin)
    n = len(x)
    missing = sorted(set(missing))
    present = [i for i in range(n) if i not in missing]
    guess_weight = Fraction(1, 2 ** len(missing))
    total = Fraction(0)
    for outcome, prob in outcome_probabilities(ghz_like(x), present, Basis.COMPUTATIONAL).items():
        bits = [0] * n
        for site, bit in zip(present, outcome):
            bits[site] = bit
        for guess in itertools.product((0, 1), repeat=len(missing)):
            for site, bit in zip(missing, guess):
                bits[site] = bit
            if ghz.decode_codeword(DigitString(tuple(bits), 2)) == secret:
                total += exact(prob) * guess_weight
    return total


def ghz_success_table(n: int) -> dict[int, set[Fraction]]:
    """For each absentee count k, the set of exact success probabilities seen
    across every secret, coin, and absentee subset of an ``n``-party deal."""
    seen: dict[int, set[Fraction]] = defaultdict(set)
    for secret in all_strings(n - 1):
        for coin in (0, 1):
            for k in range(n):
                for missing in itertools.combinations(range(n), k):
                    seen[k].add(ghz_success_probability(secret, coin, missing))
    return dict(seen)


def ghz_detection_probability(secret: DigitString, coin: int, cheaters: Iterable[int]) -> Fraction:
    """P(seal check flags cheating) after ``cheaters`` measure early."""
    x = ghz.encode_secret(secret, coin)
    target = ghz_like(x)
    total = Fraction(0)
    for prob, collapsed in outcome_distribution(target, cheaters, Basis.COMPUTATIONAL).values():
        overlap = abs(complex(target.amplitudes.conj() @ collapsed.amplitudes)) ** 2
        total += exact(prob) * (1 - exact(overlap))
    return total


# ---------------------------------------------------------------------------
# Certified deletion
# ---------------------------------------------------------------------------


def _record(x: DigitString, theta: DigitString, payload: int = 0) -> CDRecord:
    return CDRecord(x, theta, CipherKey(bytes(32), "enumeration"), payload)


def cheater_pass_probability(x: DigitString, theta: DigitString) -> Fraction:
    """P(certificate accepted) for a receiver who measured computationally
    first and then answered with a Fourier measurement of what was left."""
    rec = _record(x, theta)
    sites = range(len(x))
    total = Fraction(0)
    for p1, collapsed in outcome_distribution(encode_product(x, theta, x.radix), sites,
                                                   Basis.COMPUTATIONAL).values():
        for cert, p2 in outcome_probabilities(collapsed, sites, Basis.FOURIER).items():
            if cd_verify(rec, DeletionCertificate(cert)) is Verdict.ACCEPTED:
                total += exact(p1) * exact(p2)
    return total


def honest_pass_probability(x: DigitString, theta: DigitString) -> Fraction:
    rec = _record(x, theta)
    total = Fraction(0)
    for cert, p in outcome_probabilities(encode_product(x, theta, x.radix), range(len(x)),
                                         Basis.FOURIER).items():
        if cd_verify(rec, DeletionCertificate(cert)) is Verdict.ACCEPTED:
            total += exact(p)
    return total


def random_certificate_pass_probability(x: DigitString, theta: DigitString) -> Fraction:
    """Fraction of all ``d**m`` certificates that verify."""
    rec = _record(x, theta)
    d, m = x.radix, len(x)
    hits = sum(cd_verify(rec, DeletionCertificate(c)) is Verdict.ACCEPTED for c in all_strings(m, d))
    return Fraction(hits, d**m)


def post_deletion_view(payload: int, m: int,
                       thetas: Sequence[DigitString] | None = None) -> dict[tuple[str, str, int], Fraction]:
    """Joint law of (certificate, theta, masked payload) after an honest deletion.

    ``x`` is uniform over ``{0,1}^m`` and ``theta`` uniform over ``thetas``
    (default: every valid basis string).
    """
    thetas = list(valid_thetas(m) if thetas is None else thetas)
    weight = Fraction(1, 2**m * len(thetas))
    dist: dict[tuple[str, str, int], Fraction] = defaultdict(Fraction)
    for theta in thetas:
        for x in all_strings(m):
            masked = (payload + mask_value(x, theta)) % 2
            for cert, p in outcome_probabilities(encode_product(x, theta, 2), range(m),
                                                 Basis.FOURIER).items():
                dist[(str(cert), str(theta), masked)] += weight * exact(p)
    return dict(dist)


def decrypt_after_delete_probability(x: DigitString, theta: DigitString, payload: int) -> Fraction:
    """P(decrypting the post-deletion register recovers ``payload``)."""
    d, m = x.radix, len(x)
    masked = (payload + mask_value(x, theta)) % d
    sites = range(m)
    total = Fraction(0)
    for p1, deleted in outcome_distribution(encode_product(x, theta, d), sites, Basis.FOURIER).values():
        for outcome, p2 in outcome_probabilities(deleted, sites, Basis.COMPUTATIONAL).items():
            if (masked - mask_value(outcome, theta)) % d == payload:
                total += exact(p1) * exact(p2)
    return total


# ---------------------------------------------------------------------------
# Shamir
# ---------------------------------------------------------------------------


def consistent_secrets(shares: Sequence[ShamirShare], t: int, p: int) -> Counter:
    """How many degree < t polynomials through ``shares`` have each constant term."""
    counts: Counter = Counter()
    for coeffs in itertools.product(range(p), repeat=t):
        if all(evaluate(coeffs, s.index, p) == s.value for s in shares):
            counts[coeffs[0]] += 1
    return counts
