import pytest
from hypothesis import given
from hypothesis import strategies as st

from ceqss.cdpke import CDRecord, DeletionCertificate, cd_encrypt
from ceqss.cipher import CipherKey
from ceqss.quantum import DigitString, make_rng
from ceqss.wire import (
    WireError,
    pack_certificate,
    pack_classical,
    pack_digits,
    pack_record,
    unpack_certificate,
    unpack_classical,
    unpack_digits,
    unpack_record,
)


@st.composite
def digit_strings(draw, min_size=1):
    radix = draw(st.integers(2, 256))
    digits = draw(st.lists(st.integers(0, radix - 1), min_size=min_size, max_size=40))
    return DigitString(tuple(digits), radix)


@given(digit_strings())
def test_digits_round_trip(s):
    assert unpack_digits(pack_digits(s)) == s


@given(digit_strings())
def test_certificate_round_trip(s):
    cert = DeletionCertificate(s)
    assert unpack_certificate(pack_certificate(cert)) == cert


def test_record_round_trip():
    key = CipherKey(bytes(range(32)), key_id="k0")
    rec = CDRecord(DigitString((3, 0, 4, 1), 5), DigitString.parse("0110"), key, 2)
    back = unpack_record(pack_record(rec))
    assert back == rec
    assert back.key.material == key.material


def test_classical_round_trip():
    ct, _ = cd_encrypt(1, 5, 3, CipherKey(bytes(32), "k"), make_rng(1))
    d, m, body = unpack_classical(pack_classical(ct))
    assert (m, d, body) == (5, 3, ct.classical)


@pytest.mark.parametrize("blob", [b"", b"\x00\x00\x00\x02", b"\x00\x00\x00\x02\x00\x00\x00\x01\x05"])
def test_malformed_digits(blob):
    with pytest.raises(WireError):
        unpack_digits(blob)


def test_truncated_record():
    rec = CDRecord(DigitString.parse("01"), DigitString.parse("10"), CipherKey(bytes(32), "k"), 1)
    with pytest.raises(WireError):
        unpack_record(pack_record(rec)[:-3])
