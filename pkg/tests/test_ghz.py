import itertools
import math
from fractions import Fraction

import pytest

from ceqss import exact, ghz
from ceqss.quantum import ConsumedError, DigitString, make_rng

ds = DigitString.parse


def band(count, trials, p, sigmas=3.0):
    return abs(count / trials - p) <= sigmas * math.sqrt(p * (1 - p) / trials)


class TestCodewords:
    def test_example_encoding(self):
        assert ghz.encode_secret(ds("011100101"), 0) == ds("0011100101")
        assert ghz.encode_secret(ds("011100101"), 1) == ds("1100011010")

    def test_decode_either_branch(self):
        assert ghz.decode_codeword(ds("0011100101")) == ds("011100101")
        assert ghz.decode_codeword(ds("1100011010")) == ds("011100101")

    @pytest.mark.parametrize("length", range(1, 9))
    def test_round_trip_exhaustive(self, length):
        for s in exact.all_strings(length):
            for r in (0, 1):
                y = ghz.encode_secret(s, r)
                assert y[0] == r
                assert ghz.decode_codeword(y) == s
                assert ghz.decode_codeword(y.negate()) == s

    def test_decode_rejects_short(self):
        with pytest.raises(ValueError):
            ghz.decode_codeword(ds("0"))


class TestDeal:
    def test_custody_and_state(self):
        d = ghz.deal(ds("011100101"), make_rng(0))
        assert d.n == 10
        assert d.custody == {i: i for i in range(10)}
        assert d.secret == ds("011100101")
        assert d.codeword in (ds("0011100101"), ds("1100011010"))

    def test_party_limits(self):
        with pytest.raises(ValueError):
            ghz.deal(DigitString((0,) * 20, 2), make_rng(0))
        assert ghz.deal(ds("1"), make_rng(0)).n == 2

    def test_both_coins_occur(self):
        rng = make_rng(1)
        coins = {ghz.deal(ds("01"), rng).codeword[0] for _ in range(50)}
        assert coins == {0, 1}


class TestReconstruct:
    def test_full_quorum_always_succeeds(self):
        rng = make_rng(2)
        for _ in range(500):
            d = ghz.deal(ds("011100101"), rng)
            guess, ok = ghz.reconstruct(d, range(10), rng)
            assert ok and guess == ds("011100101")

    def test_consumed_after_reconstruct(self):
        rng = make_rng(3)
        d = ghz.deal(ds("0110"), rng)
        ghz.reconstruct(d, range(5), rng)
        with pytest.raises(ConsumedError):
            ghz.reconstruct(d, range(5), rng)
        with pytest.raises(ConsumedError):
            ghz.seal_check(d, rng)

    def test_unknown_party(self):
        d = ghz.deal(ds("01"), make_rng(0))
        with pytest.raises(ValueError):
            ghz.reconstruct(d, [0, 7], make_rng(0))

    @pytest.mark.parametrize("missing", [(9,), (0,), (3, 7)])
    def test_partial_quorum_rate(self, missing):
        # exact oracle first, then sampling against it
        trials = 20_000
        rng = make_rng(sum(missing))
        present = [p for p in range(10) if p not in missing]
        hits = 0
        for _ in range(trials):
            d = ghz.deal(ds("011100101"), rng)
            hits += ghz.reconstruct(d, present, rng)[1]
        p = 2.0 ** -len(missing)
        assert exact.ghz_success_probability(ds("011100101"), 0, missing) == Fraction(1, 2 ** len(missing))
        assert band(hits, trials, p)

    def test_exact_table_small(self):
        for n in range(2, 6):
            table = exact.ghz_success_table(n)
            assert table == {k: {Fraction(1, 2**k)} for k in range(n)}


class TestSeal:
    def test_honest_never_flagged(self):
        rng = make_rng(4)
        for _ in range(2000):
            d = ghz.deal(ds("011100101"), rng)
            assert ghz.seal_check(d, rng) is ghz.SealVerdict.HONEST

    def test_verdict_carries_no_party(self):
        assert set(ghz.SealVerdict) == {ghz.SealVerdict.HONEST, ghz.SealVerdict.CHEAT_DETECTED}
        assert not hasattr(ghz.SealVerdict.CHEAT_DETECTED, "party")

    def test_exact_detection_every_cheater_set(self):
        n = 5
        for s in exact.all_strings(n - 1):
            for r in (0, 1):
                for size in range(1, n + 1):
                    for cheaters in itertools.combinations(range(n), size):
                        assert exact.ghz_detection_probability(s, r, cheaters) == Fraction(1, 2)

    @pytest.mark.parametrize("cheaters", [(0,), (2, 5), tuple(range(6))])
    def test_detection_rate(self, cheaters):
        trials = 20_000
        rng = make_rng(len(cheaters))
        hits = 0
        for _ in range(trials):
            d = ghz.deal(ds("01101"), rng)
            ghz.cheat_measure_early(d, cheaters, rng)
            hits += ghz.seal_check(d, rng) is ghz.SealVerdict.CHEAT_DETECTED
        assert band(hits, trials, 0.5)

    def test_early_measurement_reveals_codeword_bits(self):
        rng = make_rng(5)
        d = ghz.deal(ds("0110"), rng)
        bits = ghz.cheat_measure_early(d, [1, 2], rng)
        assert bits.digits in {(d.codeword[1], d.codeword[2]), (1 - d.codeword[1], 1 - d.codeword[2])}
        assert not d.consumed

    def test_empty_cheater_set(self):
        with pytest.raises(ValueError):
            ghz.cheat_measure_early(ghz.deal(ds("01"), make_rng(0)), [], make_rng(0))
