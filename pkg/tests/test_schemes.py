import math

import pytest

from ceqss import ghz
from ceqss.adversary import (
    CdParty,
    GhzParty,
    ResponseKind,
    Strategy,
    StrategyMismatch,
    apply_strategy,
)
from ceqss.cdpke import Verdict, cd_encrypt, cd_verify
from ceqss.cdscheme import (
    cd_deal,
    cd_reconstruct,
    cd_revoke,
    threshold_deal,
    threshold_reconstruct,
    threshold_revoke,
)
from ceqss.cipher import CipherKey
from ceqss.quantum import DigitString, make_rng

ds = DigitString.parse
KEY = CipherKey(bytes(range(32)), "test")


def band(count, trials, p, sigmas=3.0):
    return abs(count / trials - p) <= sigmas * math.sqrt(p * (1 - p) / trials)


class TestStrategies:
    def test_parse(self):
        assert Strategy.parse("measure-early") is Strategy.MEASURE_EARLY
        with pytest.raises(ValueError, match="fabricate-certificate"):
            Strategy.parse("sneaky")

    def test_absent_refuses(self):
        rng = make_rng(0)
        ct, _ = cd_encrypt(0, 4, 2, KEY, rng)
        assert apply_strategy(Strategy.ABSENT, CdParty(ct, KEY), rng).kind is ResponseKind.REFUSAL

    def test_fabricate_not_defined_for_ghz(self):
        d = ghz.deal(ds("01"), make_rng(0))
        with pytest.raises(StrategyMismatch):
            apply_strategy(Strategy.FABRICATE_CERTIFICATE, GhzParty(d, 0), make_rng(0))

    def test_measure_early_leaks_payload(self):
        rng = make_rng(1)
        for b in (0, 1):
            ct, rec = cd_encrypt(b, 6, 2, KEY, rng)
            resp = apply_strategy(Strategy.MEASURE_EARLY, CdParty(ct, KEY), rng)
            assert resp.early_payload == b
            assert resp.certificate is not None

    def test_honest_certificate_and_no_leak(self):
        rng = make_rng(2)
        ct, rec = cd_encrypt(1, 6, 2, KEY, rng)
        resp = apply_strategy(Strategy.HONEST, CdParty(ct, KEY), rng)
        assert resp.early_payload is None
        assert cd_verify(rec, resp.certificate) is Verdict.ACCEPTED

    def test_fabricated_certificate_rate(self):
        trials, passes = 20_000, 0
        rng = make_rng(3)
        for _ in range(trials):
            ct, rec = cd_encrypt(0, 4, 2, KEY, rng)
            resp = apply_strategy(Strategy.FABRICATE_CERTIFICATE, CdParty(ct, KEY), rng)
            passes += cd_verify(rec, resp.certificate) is Verdict.ACCEPTED
        assert band(passes, trials, 0.25)

    def test_ghz_measure_early_returns_bits(self):
        rng = make_rng(4)
        d = ghz.deal(ds("0110"), rng)
        resp = apply_strategy(Strategy.MEASURE_EARLY, GhzParty(d, 2), rng)
        assert resp.kind is ResponseKind.RETURNED
        assert len(resp.early_bits) == 1


class TestCdScheme:
    def test_full_quorum_exact(self):
        rng = make_rng(5)
        for _ in range(300):
            s = DigitString(tuple(rng.integers(0, 2, size=5)), 2)
            deal = cd_deal(s, 8, rng)
            guess, ok = cd_reconstruct(deal, range(5), rng)
            assert ok and guess == s

    def test_all_honest_revocation(self):
        rng = make_rng(6)
        for _ in range(200):
            deal = cd_deal(ds("10110"), 8, rng)
            assert cd_revoke(deal, {}, rng).rejected == set()

    def test_rejections_only_among_cheaters(self):
        # traceability: the rejected set never leaves the cheater set
        trials = 5000
        cheaters = {1: Strategy.MEASURE_EARLY, 3: Strategy.MEASURE_EARLY}
        rng = make_rng(7)
        hits = {1: 0, 3: 0}
        for _ in range(trials):
            deal = cd_deal(ds("0110"), 4, rng)
            rejected = cd_revoke(deal, cheaters, rng).rejected
            assert rejected <= set(cheaters)
            for p in hits:
                hits[p] += p in rejected
        for p in hits:
            assert band(hits[p], trials, 1 - 2.0**-2)

    def test_absent_party_is_rejected(self):
        rng = make_rng(8)
        deal = cd_deal(ds("011"), 4, rng)
        assert cd_revoke(deal, {2: Strategy.ABSENT}, rng).rejected == {2}

    def test_post_deletion_reconstruction_is_guessing(self):
        trials, hits = 5000, 0
        rng = make_rng(9)
        for _ in range(trials):
            s = DigitString(tuple(rng.integers(0, 2, size=5)), 2)
            deal = cd_deal(s, 4, rng)
            cd_revoke(deal, {}, rng)
            hits += cd_reconstruct(deal, range(5), rng)[1]
        assert band(hits, trials, 2.0**-5)

    def test_binary_secret_required(self):
        with pytest.raises(ValueError):
            cd_deal(DigitString((0, 2), 3), 4, make_rng(0))


class TestThreshold:
    def test_reconstruct_with_t_parties(self):
        rng = make_rng(10)
        for secret in range(7):
            deal = threshold_deal(secret, 3, 5, 7, 4, rng)
            assert threshold_reconstruct(deal, [0, 2, 4], rng) == (secret, True)

    def test_quota(self):
        deal = threshold_deal(1, 3, 5, 7, 4, make_rng(0))
        assert deal.revocation_quota == 3

    def test_revocation_needs_quota(self):
        rng = make_rng(11)
        deal = threshold_deal(2, 3, 5, 7, 4, rng)
        report = threshold_revoke(deal, [0, 1, 2], {}, rng)
        assert report.revoked
        deal = threshold_deal(2, 3, 5, 7, 4, rng)
        report = threshold_revoke(deal, [0, 1, 2], {0: Strategy.ABSENT}, rng)
        assert not report.revoked

    def test_too_few_responders(self):
        deal = threshold_deal(2, 3, 5, 7, 4, make_rng(0))
        with pytest.raises(ValueError):
            threshold_revoke(deal, [0, 1], {}, make_rng(0))

    @pytest.mark.parametrize("t,n,p", [(1, 3, 7), (3, 7, 7), (2, 3, 9)])
    def test_parameter_checks(self, t, n, p):
        with pytest.raises(ValueError):
            threshold_deal(1, t, n, p, 4, make_rng(0))
