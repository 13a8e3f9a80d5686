"""Deterministic Monte Carlo experiments over the two constructions.

Trial ``i`` draws all of its randomness from a generator seeded by
``SeedSequence(master_seed, spawn_key=(i,))``, so results do not depend on
execution order or on how trials are spread over worker processes.

Each trial runs up to two independent phases, each on a fresh deal:

* seal phase -- parties act per their strategies, then the dealer runs the
  seal check (GHZ) or collects and verifies deletion certificates;
* unseal phase -- the highest ``missing`` party ids plus any absent parties
  stay away and the rest reconstruct.
"""

from __future__ import annotations

import json
import math
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Optional

import numpy as np

from . import __version__, ghz
from .adversary import GHZ_STRATEGIES, GhzParty, ResponseKind, Strategy, apply_strategy
from .cdpke import ThetaPolicy
from .cdscheme import (
    cd_deal,
    cd_reconstruct,
    cd_revoke,
    threshold_deal,
    threshold_reconstruct,
    threshold_revoke,
)
from .quantum import MAX_DIMENSION, DigitString, split_rng
from .shamir import is_prime

SCHEMA_VERSION = 1
SCHEMES = ("ghz", "cd", "threshold")
PHASES = ("seal", "unseal")
WILSON_Z = 1.959963984540054

RECONSTRUCTION = "reconstruction_success"
DETECTION = "cheat_detection"
REVOKED = "revocation_concluded"


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    scheme: str
    n: int = 10
    m: int = 16
    d: Optional[int] = None  # radix for cd (2), prime modulus for threshold (7)
    t: int = 3
    missing: int = 0
    strategies: dict[int, Strategy] = field(default_factory=dict)
    trials: int = 20_000
    seed: int = 0
    out: Optional[str] = None
    responders: Optional[list[int]] = None  # threshold revocation; default all parties
    theta_policy: str = ThetaPolicy.BALANCED.value
    phases: list[str] = field(default_factory=lambda: list(PHASES))

    @property
    def radix(self) -> int:
        if self.d is not None:
            return self.d
        return 7 if self.scheme == "threshold" else 2

    def validate(self) -> "ExperimentConfig":
        if self.scheme not in SCHEMES:
            raise ConfigError("scheme", f"expected one of {SCHEMES}, got {self.scheme!r}")
        if self.trials < 1:
            raise ConfigError("trials", "must be positive")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed", "must fit in 64 bits")
        if self.n < 1:
            raise ConfigError("n", "must be positive")
        if not 0 <= self.missing < self.n:
            raise ConfigError("missing", f"must be in [0, n) = [0, {self.n})")
        if not self.phases or set(self.phases) - set(PHASES):
            raise ConfigError("phases", f"expected a non-empty subset of {PHASES}, got {self.phases}")
        try:
            ThetaPolicy(self.theta_policy)
        except ValueError:
            raise ConfigError("theta_policy", f"unknown policy {self.theta_policy!r}") from None
        for party, strategy in self.strategies.items():
            if not 0 <= party < self.n:
                raise ConfigError("strategies", f"party {party} out of range for n={self.n}")
            if self.scheme == "ghz" and strategy not in GHZ_STRATEGIES:
                raise ConfigError("strategies", f"{strategy.value} is not available in the ghz scheme")
        if not self.present():
            raise ConfigError("missing", "no party left to reconstruct")

        if self.scheme == "ghz":
            if not 2 <= self.n <= ghz.MAX_PARTIES:
                raise ConfigError("n", f"ghz needs 2 <= n <= {ghz.MAX_PARTIES}")
            return self
        if self.m < 2:
            raise ConfigError("m", "must be at least 2")
        if self.radix**self.m > MAX_DIMENSION:
            raise ConfigError("m", f"register dimension {self.radix}^{self.m} exceeds the size cap")
        if self.scheme == "cd":
            if self.radix != 2:
                raise ConfigError("d", "the bitwise scheme shares binary secrets; d must be 2")
            return self
        if not is_prime(self.radix):
            raise ConfigError("d", f"threshold modulus {self.radix} is not prime")
        if not 1 < self.t <= self.n < self.radix:
            raise ConfigError("t", f"need 1 < t <= n < p, got t={self.t}, n={self.n}, p={self.radix}")
        responders = self.threshold_responders()
        if len(responders) < self.t or any(not 0 <= r < self.n for r in responders):
            raise ConfigError("responders", f"need at least t={self.t} valid party ids")
        return self

    def strategy_of(self, party: int) -> Strategy:
        return self.strategies.get(party, Strategy.HONEST)

    def present(self) -> list[int]:
        return [p for p in range(self.n - self.missing) if self.strategy_of(p) is not Strategy.ABSENT]

    def threshold_responders(self) -> list[int]:
        return sorted(set(self.responders)) if self.responders is not None else list(range(self.n))

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        out["d"] = self.radix
        out["strategies"] = {str(p): s.value for p, s in sorted(self.strategies.items())}
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(sorted(unknown)[0], "unknown config field")
        data = dict(data)
        if "scheme" not in data:
            raise ConfigError("scheme", "required")
        try:
            data["strategies"] = {int(p): Strategy.parse(s) for p, s in data.get("strategies", {}).items()}
        except ValueError as exc:
            raise ConfigError("strategies", str(exc)) from None
        return cls(**data)


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------


def trial_seed_sequence(master_seed: int, index: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(master_seed, spawn_key=(index,))


def trial_rng(master_seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(trial_seed_sequence(master_seed, index))


def _random_bits(rng: np.random.Generator, k: int) -> DigitString:
    return DigitString(tuple(rng.integers(0, 2, size=k)), 2)


def _ghz_trial(cfg: ExperimentConfig, rng: np.random.Generator) -> dict[str, bool]:
    seal_rng, open_rng = split_rng(rng, 2)
    out = {}
    if "seal" in cfg.phases:
        sealed = ghz.deal(_random_bits(seal_rng, cfg.n - 1), seal_rng)
        refused = False
        for party in range(cfg.n):
            resp = apply_strategy(cfg.strategy_of(party), GhzParty(sealed, party), seal_rng)
            refused |= resp.kind is ResponseKind.REFUSAL
        # a missing particle counts as detection, outside the quantum test
        out[DETECTION] = refused or ghz.seal_check(sealed, seal_rng) is ghz.SealVerdict.CHEAT_DETECTED
    if "unseal" in cfg.phases:
        opened = ghz.deal(_random_bits(open_rng, cfg.n - 1), open_rng)
        _, out[RECONSTRUCTION] = ghz.reconstruct(opened, cfg.present(), open_rng)
    return out


def _cd_trial(cfg: ExperimentConfig, rng: np.random.Generator) -> dict[str, bool]:
    seal_rng, open_rng = split_rng(rng, 2)
    policy = ThetaPolicy(cfg.theta_policy)
    out = {}
    if "seal" in cfg.phases:
        sealed = cd_deal(_random_bits(seal_rng, cfg.n), cfg.m, seal_rng, policy)
        report = cd_revoke(sealed, cfg.strategies, seal_rng)
        out.update({f"rejection.party_{p}": p in report.rejected for p in range(cfg.n)})
        out[DETECTION] = bool(report.rejected)
    if "unseal" in cfg.phases:
        opened = cd_deal(_random_bits(open_rng, cfg.n), cfg.m, open_rng, policy)
        _, out[RECONSTRUCTION] = cd_reconstruct(opened, cfg.present(), open_rng)
    return out


def _threshold_trial(cfg: ExperimentConfig, rng: np.random.Generator) -> dict[str, bool]:
    seal_rng, open_rng = split_rng(rng, 2)
    policy = ThetaPolicy(cfg.theta_policy)
    p = cfg.radix
    out = {}
    if "seal" in cfg.phases:
        sealed = threshold_deal(int(seal_rng.integers(0, p)), cfg.t, cfg.n, p, cfg.m, seal_rng, policy)
        report = threshold_revoke(sealed, cfg.threshold_responders(), cfg.strategies, seal_rng)
        out.update({f"rejection.party_{q}": q in report.rejected for q in report.verdicts})
        out[DETECTION] = bool(report.rejected)
        out[REVOKED] = bool(report.revoked)
    if "unseal" in cfg.phases:
        opened = threshold_deal(int(open_rng.integers(0, p)), cfg.t, cfg.n, p, cfg.m, open_rng, policy)
        _, out[RECONSTRUCTION] = threshold_reconstruct(opened, cfg.present(), open_rng)
    return out


_TRIALS = {"ghz": _ghz_trial, "cd": _cd_trial, "threshold": _threshold_trial}


def run_trial(cfg: ExperimentConfig, index: int) -> dict[str, bool]:
    return _TRIALS[cfg.scheme](cfg, trial_rng(cfg.seed, index))


def _run_range(cfg: ExperimentConfig, start: int, stop: int) -> Counter:
    counts: Counter = Counter()
    for i in range(start, stop):
        for name, hit in run_trial(cfg, i).items():
            counts[name] += int(hit)
    return counts


# ---------------------------------------------------------------------------
# Reports
# ---------------------------------------------------------------------------


def wilson_interval(count: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = count / trials
    denom = 1 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if count == 0 else max(0.0, centre - half)
    hi = 1.0 if count == trials else min(1.0, centre + half)
    return lo, hi


@dataclass
class Metric:
    count: int
    trials: int
    rate: float
    wilson_low: float
    wilson_high: float

    @classmethod
    def of(cls, count: int, trials: int) -> "Metric":
        lo, hi = wilson_interval(count, trials)
        return cls(count, trials, count / trials, lo, hi)


@dataclass
class ExperimentReport:
    config: dict[str, Any]
    metrics: dict[str, Metric]
    schema_version: int = SCHEMA_VERSION
    library_version: str = __version__
    wall_clock_s: Optional[float] = None

    def metric(self, name: str) -> Metric:
        return self.metrics[name]

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        out = {
            "schema_version": self.schema_version,
            "library_version": self.library_version,
            "config": self.config,
            "metrics": {k: asdict(v) for k, v in self.metrics.items()},
        }
        if timing and self.wall_clock_s is not None:
            out["wall_clock_s"] = self.wall_clock_s
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentReport":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema_version {data.get('schema_version')!r}")
        return cls(
            config=data["config"],
            metrics={k: Metric(**v) for k, v in data["metrics"].items()},
            schema_version=data["schema_version"],
            library_version=data["library_version"],
            wall_clock_s=data.get("wall_clock_s"),
        )

    @classmethod
    def from_json(cls, text: str | bytes) -> "ExperimentReport":
        return cls.from_dict(json.loads(text))


def _metric_order(name: str) -> tuple:
    fixed = [RECONSTRUCTION, DETECTION, REVOKED]
    if name in fixed:
        return (0, fixed.index(name))
    prefix, _, idx = name.rpartition("_")
    return (1, prefix, int(idx) if idx.isdigit() else 0)


def run_experiment(cfg: ExperimentConfig, workers: int = 1) -> ExperimentReport:
    cfg.validate()
    started = time.perf_counter()
    if workers <= 1 or cfg.trials < 2 * workers:
        counts = _run_range(cfg, 0, cfg.trials)
    else:
        bounds = np.linspace(0, cfg.trials, workers + 1).astype(int)
        counts = Counter()
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_run_range, cfg, int(a), int(b)) for a, b in zip(bounds, bounds[1:])]
            for fut in futures:
                counts.update(fut.result())
    metrics = {name: Metric.of(counts[name], cfg.trials) for name in sorted(counts, key=_metric_order)}
    return ExperimentReport(cfg.to_dict(), metrics, wall_clock_s=time.perf_counter() - started)


def binomial_band(p: float, trials: int, sigmas: float = 3.0) -> tuple[float, float]:
    half = sigmas * math.sqrt(p * (1 - p) / trials)
    return p - half, p + half


def within_band(count: int, trials: int, p: float, sigmas: float = 3.0) -> bool:
    lo, hi = binomial_band(p, trials, sigmas)
    return lo <= count / trials <= hi
