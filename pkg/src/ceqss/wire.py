"""Byte encodings for logged deal artifacts.

Digit strings are an 8-byte header (big-endian uint32 radix, uint32 length)
followed by one byte per digit.  Composite records are sequences of frames,
each a big-endian uint32 length followed by that many bytes.
"""

from __future__ import annotations

import struct

from .cdpke import MAX_RADIX, CDCiphertext, CDRecord, DeletionCertificate
from .cipher import CipherKey
from .quantum import DigitString

_HEADER = struct.Struct(">II")
_FRAME = struct.Struct(">I")


class WireError(ValueError):
    pass


def pack_digits(ds: DigitString) -> bytes:
    if ds.radix > MAX_RADIX:
        raise WireError(f"radix {ds.radix} does not fit one digit per byte")
    return _HEADER.pack(ds.radix, len(ds)) + bytes(ds.digits)


def unpack_digits(data: bytes) -> DigitString:
    if len(data) < _HEADER.size:
        raise WireError("truncated digit-string header")
    radix, length = _HEADER.unpack_from(data)
    body = data[_HEADER.size:]
    if len(body) != length:
        raise WireError(f"header says {length} digits, found {len(body)}")
    try:
        return DigitString(tuple(body), radix)
    except ValueError as exc:
        raise WireError(str(exc)) from exc


def _frames(*parts: bytes) -> bytes:
    return b"".join(_FRAME.pack(len(p)) + p for p in parts)


def _split_frames(data: bytes, count: int) -> list[bytes]:
    out, pos = [], 0
    for _ in range(count):
        if pos + _FRAME.size > len(data):
            raise WireError("truncated frame header")
        (n,) = _FRAME.unpack_from(data, pos)
        pos += _FRAME.size
        if pos + n > len(data):
            raise WireError("truncated frame body")
        out.append(data[pos:pos + n])
        pos += n
    if pos != len(data):
        raise WireError(f"{len(data) - pos} trailing bytes")
    return out


def pack_record(rec: CDRecord) -> bytes:
    payload = DigitString((rec.payload,), rec.radix)
    return _frames(pack_digits(rec.x), pack_digits(rec.theta), rec.key.key_id.encode(),
                   rec.key.material, pack_digits(payload))


def unpack_record(data: bytes) -> CDRecord:
    x, theta, key_id, material, payload = _split_frames(data, 5)
    return CDRecord(unpack_digits(x), unpack_digits(theta),
                    CipherKey(material, key_id.decode()), unpack_digits(payload)[0])


def pack_certificate(cert: DeletionCertificate) -> bytes:
    return pack_digits(cert.outcomes)


def unpack_certificate(data: bytes) -> DeletionCertificate:
    return DeletionCertificate(unpack_digits(data))


def pack_classical(ct: CDCiphertext) -> bytes:
    """The classical half of a ciphertext, tagged with its (radix, m) header."""
    return _HEADER.pack(ct.d, ct.m) + _frames(ct.classical)


def unpack_classical(data: bytes) -> tuple[int, int, bytes]:
    """Returns ``(d, m, classical bytes)``."""
    if len(data) < _HEADER.size:
        raise WireError("truncated header")
    d, m = _HEADER.unpack_from(data)
    (body,) = _split_frames(data[_HEADER.size:], 1)
    return d, m, body
