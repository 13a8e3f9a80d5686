"""Exit criteria for the simulator, runnable from pytest or ``ceqss accept``.

Statistical checks use a 3-sigma binomial band around the claimed rate;
distribution-shaped checks use a chi-square test at alpha = 0.001.  Exact
checks compare counts or ``Fraction`` values with no tolerance.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np
from scipy.stats import chisquare

from . import exact
from .adversary import Strategy
from .cdscheme import threshold_deal, threshold_revoke
from .cdpke import Verdict
from .harness import DETECTION, RECONSTRUCTION, ExperimentConfig, run_experiment, within_band
from .quantum import (
    Basis,
    DigitString,
    PureState,
    basis_vector,
    fourier_matrix,
    ghz_like,
    inner_product,
    make_rng,
    measure_sites,
)
from .shamir import shamir_reconstruct, shamir_split

DEFAULT_SEED = 20240601
SIGMAS = 3.0
CHI2_ALPHA = 0.001
MUB_TOL = 1e-9
MUB_RADICES = (2, 3, 5, 6, 7)


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    checks: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.number}] {self.title}: " + "; ".join(self.checks)


class _Checks:
    def __init__(self):
        self.ok = True
        self.notes: list[str] = []

    def exact(self, label: str, got, want) -> None:
        hit = got == want
        self.ok &= hit
        self.notes.append(f"{label} {got} {'==' if hit else '!='} {want}")

    def band(self, label: str, count: int, trials: int, p: float) -> None:
        hit = within_band(count, trials, p, SIGMAS)
        self.ok &= hit
        half = SIGMAS * (p * (1 - p) / trials) ** 0.5
        self.notes.append(f"{label} {count}/{trials}={count / trials:.4f} "
                          f"{'in' if hit else 'NOT in'} {p:.4f}+-{half:.4f}")

    def flag(self, label: str, hit: bool) -> None:
        self.ok &= bool(hit)
        self.notes.append(f"{label} {'ok' if hit else 'FAILED'}")


class Suite:
    """Runs criteria with a shared experiment cache."""

    def __init__(self, seed: int = DEFAULT_SEED, scale: float = 1.0):
        self.seed = seed
        self.scale = scale
        self._cache: dict[tuple, object] = {}

    def trials(self, n: int) -> int:
        return max(1, int(round(n * self.scale)))

    def experiment(self, **kw):
        key = tuple(sorted((k, repr(v)) for k, v in kw.items()))
        if key not in self._cache:
            self._cache[key] = run_experiment(ExperimentConfig(seed=self.seed, **kw))
        return self._cache[key]

    # -- criteria ---------------------------------------------------------

    def c1_ghz_full_quorum(self) -> CriterionResult:
        c = _Checks()
        n_trials = self.trials(20_000)
        r = self.experiment(scheme="ghz", n=10, trials=n_trials, phases=["unseal"])
        c.exact("successes", r.metric(RECONSTRUCTION).count, n_trials)
        return CriterionResult(1, "GHZ full-quorum reconstruction", c.ok, c.notes)

    def c2_ghz_collaboration(self) -> CriterionResult:
        c = _Checks()
        n_trials = self.trials(20_000)
        for k in (1, 2, 3):
            r = self.experiment(scheme="ghz", n=10, missing=k, trials=n_trials, phases=["unseal"])
            c.band(f"k={k}", r.metric(RECONSTRUCTION).count, n_trials, 2.0**-k)
        for n in range(2, 7):
            table = exact.ghz_success_table(n)
            c.flag(f"exact n={n}", all(table[k] == {Fraction(1, 2**k)} for k in range(n)))
        return CriterionResult(2, "GHZ collaboration-encouraging rate 2^-k", c.ok, c.notes)

    def c3_ghz_seal(self) -> CriterionResult:
        c = _Checks()
        n_trials = self.trials(20_000)
        r = self.experiment(scheme="ghz", n=10, trials=n_trials, phases=["seal"],
                            strategies={0: Strategy.MEASURE_EARLY})
        c.band("one cheater detected", r.metric(DETECTION).count, n_trials, 0.5)
        r = self.experiment(scheme="ghz", n=10, trials=n_trials, phases=["seal"])
        c.exact("all-honest verdicts Honest", n_trials - r.metric(DETECTION).count, n_trials)
        return CriterionResult(3, "GHZ seal detection 1/2", c.ok, c.notes)

    def c4_cd_reconstruction(self) -> CriterionResult:
        c = _Checks()
        full = self.trials(10_000)
        r = self.experiment(scheme="cd", n=5, m=16, trials=full, phases=["unseal"])
        c.exact("full quorum", r.metric(RECONSTRUCTION).count, full)
        n_trials = self.trials(20_000)
        for k in (1, 2, 3):
            r = self.experiment(scheme="cd", n=5, m=16, missing=k, trials=n_trials, phases=["unseal"])
            c.band(f"k={k}", r.metric(RECONSTRUCTION).count, n_trials, 2.0**-k)
        return CriterionResult(4, "Certified-deletion scheme reconstruction", c.ok, c.notes)

    def c5_cd_seal(self) -> CriterionResult:
        c = _Checks()
        n_trials = self.trials(20_000)
        r = self.experiment(scheme="cd", n=5, m=16, trials=n_trials, phases=["seal"],
                            strategies={0: Strategy.MEASURE_EARLY})
        c.band("cheater rejected", r.metric("rejection.party_0").count, n_trials, 1 - 2.0**-8)
        honest_rejections = sum(r.metric(f"rejection.party_{p}").count for p in range(1, 5))
        c.exact("honest false rejections", honest_rejections, 0)
        ok = True
        for m in range(2, 9):
            thetas = exact.valid_thetas(m) if m <= 6 else exact.balanced_thetas(m)
            x = DigitString(tuple(i % 2 for i in range(m)), 2)
            ok &= all(exact.cheater_pass_probability(x, th) == Fraction(1, 2 ** sum(th.digits))
                      for th in thetas)
        c.flag("exact cheater pass 2^-w for m<=8", ok)
        return CriterionResult(5, "Certified-deletion seal detection and traceability", c.ok, c.notes)

    def c6_deletion_hiding(self) -> CriterionResult:
        c = _Checks()
        for m in range(2, 7):
            c.flag(f"m={m} views equal", exact.post_deletion_view(0, m) == exact.post_deletion_view(1, m))
        return CriterionResult(6, "Certified-deletion hiding", c.ok, c.notes)

    def c7_mub(self) -> CriterionResult:
        c = _Checks()
        for d in MUB_RADICES:
            worst = max(abs(abs(inner_product(basis_vector(i, Basis.FOURIER, d),
                                              basis_vector(j, Basis.COMPUTATIONAL, d))) ** 2 - 1 / d)
                        for i in range(d) for j in range(d))
            c.flag(f"d={d} max dev {worst:.1e}", worst <= MUB_TOL)
        return CriterionResult(7, "Mutually unbiased bases", c.ok, c.notes)

    def c8_shamir(self) -> CriterionResult:
        c = _Checks()
        p, t, n = 7, 3, 5
        rng = make_rng(self.seed)
        ok = True
        for _ in range(100):
            secret = int(rng.integers(0, p))
            shares = shamir_split(secret, t, n, p, rng)
            ok &= all(shamir_reconstruct(list(sub), t, p) == secret
                      for sub in itertools.combinations(shares, t))
        c.flag("every 3-subset reconstructs (100 secrets)", ok)
        shares = shamir_split(int(rng.integers(0, p)), t, n, p, rng)
        uniform = all(exact.consistent_secrets(list(sub), t, p) == {s: 1 for s in range(p)}
                      for sub in itertools.combinations(shares, t - 1))
        c.flag("every 2-subset consistent with all 7 secrets once", uniform)
        revoked = 0
        rounds = 200
        for _ in range(rounds):
            deal = threshold_deal(int(rng.integers(0, p)), t, n, p, 4, rng)
            report = threshold_revoke(deal, range(n), {}, rng)
            revoked += report.revoked and all(v is Verdict.ACCEPTED for v in report.verdicts.values())
        c.exact("all-honest revocations concluded", revoked, rounds)
        return CriterionResult(8, "Shamir threshold and revocation", c.ok, c.notes)

    def c9_born_rule(self) -> CriterionResult:
        c = _Checks()
        samples = self.trials(50_000)
        for offset, (label, state, sites, basis) in enumerate(reference_states()):
            probs = analytic_marginal(state.amplitudes, state.radix, state.sites, sites, basis)
            rng = make_rng(self.seed + offset)
            counts = np.zeros_like(probs)
            for _ in range(samples):
                outcome, _ = measure_sites(state, sites, basis, rng)
                counts[outcome.index()] += 1
            support = probs > 1e-12
            stray = counts[~support].sum()
            pvalue = chisquare(counts[support], probs[support] * samples).pvalue
            hit = stray == 0 and pvalue > CHI2_ALPHA
            c.ok &= hit
            c.notes.append(f"{label} p={pvalue:.3g}{'' if stray == 0 else f' stray={int(stray)}'}")
        return CriterionResult(9, "Born-rule sampling", c.ok, c.notes)

    CRITERIA: dict[int, Callable[["Suite"], CriterionResult]] = {
        1: c1_ghz_full_quorum,
        2: c2_ghz_collaboration,
        3: c3_ghz_seal,
        4: c4_cd_reconstruction,
        5: c5_cd_seal,
        6: c6_deletion_hiding,
        7: c7_mub,
        8: c8_shamir,
        9: c9_born_rule,
    }

    def run(self, number: int) -> CriterionResult:
        return self.CRITERIA[number](self)

    def run_all(self, only: Optional[list[int]] = None) -> list[CriterionResult]:
        return [self.run(k) for k in sorted(only or self.CRITERIA)]


# ---------------------------------------------------------------------------
# Born-rule references, computed without the simulator's measurement path
# ---------------------------------------------------------------------------


def reference_states() -> list[tuple[str, PureState, list[int], Basis]]:
    three_qubit = np.array([1, 2j, -1, 0.5, 0, 1 + 1j, 3, -2], dtype=complex)
    qutrits = np.array([1, 1j, 2, 0, -1, 1, 0.5j, 0, 1], dtype=complex)
    return [
        ("ghz-0110 sites{0,2} comp", ghz_like(DigitString.parse("0110")), [0, 2], Basis.COMPUTATIONAL),
        ("3-qubit sites{1,2} fourier", PureState(2, 3, three_qubit / np.linalg.norm(three_qubit)),
         [1, 2], Basis.FOURIER),
        ("2-qutrit site{1} fourier", PureState(3, 2, qutrits / np.linalg.norm(qutrits)), [1], Basis.FOURIER),
    ]


def analytic_marginal(amps: np.ndarray, d: int, m: int, sites: list[int], basis: Basis) -> np.ndarray:
    """Outcome probabilities via the full ``d**m`` unitary and explicit index sums."""
    local = fourier_matrix(d).conj().T if basis is Basis.FOURIER else np.eye(d)
    unitary = np.ones((1, 1), dtype=complex)
    for s in range(m):
        unitary = np.kron(unitary, local if s in sites else np.eye(d))
    full = np.abs(unitary @ amps) ** 2
    out = np.zeros(d ** len(sites))
    for idx in range(d**m):
        digits = DigitString.from_index(idx, m, d).digits
        key = 0
        for s in sorted(sites):
            key = key * d + digits[s]
        out[key] += full[idx]
    return out
