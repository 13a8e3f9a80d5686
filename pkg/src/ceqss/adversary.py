"""Closed catalogue of participant behaviours used by both schemes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from . import ghz
from .cdpke import CDCiphertext, DeletionCertificate, cd_decrypt, cd_delete
from .cipher import CipherKey
from .quantum import DigitString


class Strategy(str, enum.Enum):
    HONEST = "honest"
    MEASURE_EARLY = "measure-early"
    FABRICATE_CERTIFICATE = "fabricate-certificate"
    ABSENT = "absent"

    @classmethod
    def parse(cls, name: str) -> "Strategy":
        try:
            return cls(name)
        except ValueError:
            names = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown strategy {name!r} (expected one of: {names})") from None


class StrategyMismatch(ValueError):
    """The strategy has no meaning under the scheme in play."""


@dataclass
class GhzParty:
    deal: ghz.GhzDeal
    party: int


@dataclass
class CdParty:
    ciphertext: CDCiphertext
    key: CipherKey


PartyContext = Union[GhzParty, CdParty]


class ResponseKind(enum.Enum):
    RETURNED = "returned"  # GHZ particle handed back
    CERTIFICATE = "certificate"
    REFUSAL = "refusal"


@dataclass(frozen=True)
class PartyResponse:
    kind: ResponseKind
    certificate: Optional[DeletionCertificate] = None
    # What a cheater extracted before answering; None for honest parties.
    early_bits: Optional[DigitString] = None
    early_payload: Optional[int] = None


GHZ_STRATEGIES = frozenset({Strategy.HONEST, Strategy.MEASURE_EARLY, Strategy.ABSENT})


def apply_strategy(strategy: Strategy, context: PartyContext,
                   rng: np.random.Generator) -> PartyResponse:
    """Run one party's side of a seal check / revocation request."""
    strategy = Strategy(strategy)
    if strategy is Strategy.ABSENT:
        return PartyResponse(ResponseKind.REFUSAL)

    if isinstance(context, GhzParty):
        if strategy not in GHZ_STRATEGIES:
            raise StrategyMismatch(f"{strategy.value} is not a GHZ-scheme behaviour")
        early = None
        if strategy is Strategy.MEASURE_EARLY:
            early = ghz.cheat_measure_early(context.deal, [context.party], rng)
        return PartyResponse(ResponseKind.RETURNED, early_bits=early)

    if isinstance(context, CdParty):
        if strategy is Strategy.FABRICATE_CERTIFICATE:
            ct = context.ciphertext
            digits = DigitString(tuple(rng.integers(0, ct.d, size=ct.m)), ct.d)
            return PartyResponse(ResponseKind.CERTIFICATE, DeletionCertificate(digits))
        early = None
        if strategy is Strategy.MEASURE_EARLY:
            early = cd_decrypt(context.ciphertext, context.key, rng)
        cert = cd_delete(context.ciphertext, rng)
        return PartyResponse(ResponseKind.CERTIFICATE, cert, early_payload=early)

    raise StrategyMismatch(f"no scheme context of type {type(context).__name__}")
