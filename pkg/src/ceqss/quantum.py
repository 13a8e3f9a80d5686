"""Small-dimension pure-state simulation over qubits and qudits.

Two register representations are provided:

* ``PureState`` -- a dense amplitude vector of length ``d**m``.  Site 0 is the
  leftmost digit and the most significant index digit.
* ``ProductState`` -- an ``(m, d)`` array of single-site amplitude vectors.
  Conjugate-coding registers never leave the product form under site-local
  measurements, so they are kept factorised; ``dense()`` expands on demand.

Measurements follow the Born rule.  "Fourier" measurement projects onto
``|k^> = d**-0.5 * sum_j w**(k*j) |j>`` with ``w = exp(2*pi*i/d)``; at ``d == 2``
this is the Hadamard basis.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

MAX_DIMENSION = 2**20
NORM_TOL = 1e-9
_ZERO_PROB = 1e-15


class Basis(enum.Enum):
    COMPUTATIONAL = "computational"
    FOURIER = "fourier"


class CheckResult(enum.Enum):
    PASS = "pass"
    FAIL = "fail"


class ConsumedError(RuntimeError):
    """Raised when a single-use quantum register is used again."""


@dataclass(frozen=True)
class DigitString:
    """A classical string over ``{0, ..., radix-1}``."""

    digits: tuple[int, ...]
    radix: int = 2

    def __post_init__(self):
        digits = tuple(map(int, self.digits))
        object.__setattr__(self, "digits", digits)
        if self.radix < 2:
            raise ValueError(f"radix must be >= 2, got {self.radix}")
        if not digits:
            raise ValueError("digit string must be non-empty")
        if min(digits) < 0 or max(digits) >= self.radix:
            bad = next(v for v in digits if not 0 <= v < self.radix)
            raise ValueError(f"digit {bad} out of range for radix {self.radix}")

    @classmethod
    def parse(cls, text: str, radix: int = 2) -> "DigitString":
        return cls(tuple(int(ch, 36) for ch in text), radix)

    @classmethod
    def from_index(cls, index: int, length: int, radix: int = 2) -> "DigitString":
        digits = []
        for _ in range(length):
            index, r = divmod(index, radix)
            digits.append(r)
        if index:
            raise ValueError("index does not fit in the requested length")
        return cls(tuple(reversed(digits)), radix)

    def index(self) -> int:
        out = 0
        for v in self.digits:
            out = out * self.radix + v
        return out

    def negate(self) -> "DigitString":
        """Bit-wise negation; binary strings only."""
        if self.radix != 2:
            raise ValueError("negation is defined for radix 2 only")
        return DigitString(tuple(1 - v for v in self.digits), 2)

    def __len__(self) -> int:
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __getitem__(self, i):
        return self.digits[i]

    def __str__(self) -> str:
        if self.radix <= 36:
            return "".join(np.base_repr(v, 36).lower() for v in self.digits)
        return ",".join(str(v) for v in self.digits)


@lru_cache(maxsize=None)
def fourier_matrix(d: int) -> np.ndarray:
    """Columns are the Fourier basis vectors: ``F[j, k] = w**(j*k) / sqrt(d)``."""
    if d < 2:
        raise ValueError(f"radix must be >= 2, got {d}")
    j = np.arange(d)
    mat = np.exp(2j * np.pi * np.outer(j, j) / d) / np.sqrt(d)
    mat.flags.writeable = False
    return mat


@lru_cache(maxsize=None)
def _identity(d: int) -> np.ndarray:
    mat = np.eye(d, dtype=complex)
    mat.flags.writeable = False
    return mat


def _basis_columns(basis: Basis, d: int) -> np.ndarray:
    if basis is Basis.FOURIER:
        return fourier_matrix(d)
    return _identity(d)


def _check_normalized(amps: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(amps)):
        raise ValueError(f"{what} has non-finite amplitudes")
    norm = float(np.sum(np.abs(amps) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise ValueError(f"{what} is not normalized (norm^2 = {norm!r})")


@dataclass(frozen=True, eq=False)
class PureState:
    radix: int
    sites: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.radix < 2 or self.sites < 1:
            raise ValueError("need radix >= 2 and at least one site")
        dim = self.radix**self.sites
        if dim > MAX_DIMENSION:
            raise ValueError(f"dimension {self.radix}^{self.sites} exceeds cap {MAX_DIMENSION}")
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (dim,):
            raise ValueError(f"expected {dim} amplitudes, got {amps.size}")
        _check_normalized(amps, "state")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape((self.radix,) * self.sites)

    def dense(self) -> "PureState":
        return self

    def kron(self, other: "PureState") -> "PureState":
        if other.radix != self.radix:
            raise ValueError("radix mismatch")
        return PureState(self.radix, self.sites + other.sites, np.kron(self.amplitudes, other.amplitudes))

    def probability_of(self, digits: DigitString) -> float:
        return float(abs(self.amplitudes[digits.index()]) ** 2)


@dataclass(frozen=True, eq=False)
class ProductState:
    """Tensor product of ``m`` single-site states, stored as an ``(m, d)`` array."""

    radix: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[1] != self.radix or amps.shape[0] < 1:
            raise ValueError(f"expected an (m, {self.radix}) amplitude array, got {amps.shape}")
        if not np.all(np.isfinite(amps)):
            raise ValueError("state has non-finite amplitudes")
        norms = np.sum(np.abs(amps) ** 2, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOL):
            raise ValueError("every factor must be normalized")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def _trusted(cls, radix: int, amplitudes: np.ndarray) -> "ProductState":
        # rows are known basis columns; skip re-validation on hot paths
        amplitudes.flags.writeable = False
        obj = object.__new__(cls)
        object.__setattr__(obj, "radix", radix)
        object.__setattr__(obj, "amplitudes", amplitudes)
        return obj

    @property
    def sites(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def dim(self) -> int:
        return self.radix**self.sites

    def factor(self, site: int) -> PureState:
        return PureState(self.radix, 1, self.amplitudes[site])

    def dense(self) -> PureState:
        if self.dim > MAX_DIMENSION:
            raise ValueError(f"dimension {self.radix}^{self.sites} exceeds cap {MAX_DIMENSION}")
        out = np.ones(1, dtype=complex)
        for row in self.amplitudes:
            out = np.kron(out, row)
        return PureState(self.radix, self.sites, out)


State = Union[PureState, ProductState]


# ---------------------------------------------------------------------------
# Construction
# ---------------------------------------------------------------------------


def basis_vector(i: int, basis: Basis, d: int) -> PureState:
    if not 0 <= i < d:
        raise ValueError(f"digit {i} out of range for radix {d}")
    return PureState(d, 1, _basis_columns(basis, d)[:, i])


def _check_encoding_args(x: DigitString, theta: DigitString, d: int) -> None:
    if len(x) != len(theta):
        raise ValueError(f"length mismatch: x has {len(x)} digits, theta has {len(theta)}")
    if x.radix != d:
        raise ValueError(f"x has radix {x.radix}, expected {d}")
    if theta.radix != 2:
        raise ValueError("theta must be a binary string")


def encode_product(x: DigitString, theta: DigitString, d: int) -> ProductState:
    """``|x>_theta`` in factorised form: site i is |x_i> (theta_i=0) or |x_i^> (theta_i=1)."""
    _check_encoding_args(x, theta, d)
    xs = np.fromiter(x.digits, dtype=int, count=len(x))
    fourier_sites = np.fromiter(theta.digits, dtype=bool, count=len(theta))
    rows = np.where(fourier_sites[:, None], fourier_matrix(d)[:, xs].T, _identity(d)[xs])
    return ProductState._trusted(d, rows)


def encode_string(x: DigitString, theta: DigitString, d: int) -> PureState:
    return encode_product(x, theta, d).dense()


def ghz_like(x: DigitString) -> PureState:
    """(|x> + |x_bar>) / sqrt(2) on ``len(x)`` qubits."""
    if x.radix != 2:
        raise ValueError("ghz_like needs a binary codeword")
    n = len(x)
    if 2**n > MAX_DIMENSION:
        raise ValueError(f"{n} qubits exceeds the size cap")
    amps = np.zeros(2**n, dtype=complex)
    amps[x.index()] += 1 / np.sqrt(2)
    amps[x.negate().index()] += 1 / np.sqrt(2)
    return PureState(2, n, amps)


# ---------------------------------------------------------------------------
# Measurement
# ---------------------------------------------------------------------------


def _normalize_sites(state: State, sites: Iterable[int]) -> list[int]:
    chosen = sorted(set(int(s) for s in sites))
    if not chosen:
        raise ValueError("site set must be non-empty")
    if chosen[0] < 0 or chosen[-1] >= state.sites:
        raise ValueError(f"site out of range for a {state.sites}-site register: {chosen}")
    return chosen


def _to_measurement_frame(tensor: np.ndarray, sites: Sequence[int], basis: Basis, d: int) -> np.ndarray:
    if basis is Basis.COMPUTATIONAL:
        return tensor
    adj = fourier_matrix(d).conj().T
    for s in sites:
        tensor = np.moveaxis(np.tensordot(adj, tensor, axes=([1], [s])), 0, s)
    return tensor


def _from_measurement_frame(tensor: np.ndarray, sites: Sequence[int], basis: Basis, d: int) -> np.ndarray:
    if basis is Basis.COMPUTATIONAL:
        return tensor
    mat = fourier_matrix(d)
    for s in sites:
        tensor = np.moveaxis(np.tensordot(mat, tensor, axes=([1], [s])), 0, s)
    return tensor


def _sample_index(probs: np.ndarray, rng: np.random.Generator) -> int:
    probs = np.clip(probs, 0.0, 1.0)
    cdf = np.cumsum(probs)
    u = rng.random() * cdf[-1]
    return min(int(np.searchsorted(cdf, u, side="right")), probs.size - 1)


def _dense_frame(state: PureState, sites: list[int], basis: Basis):
    phi = _to_measurement_frame(state.tensor(), sites, basis, state.radix)
    others = tuple(a for a in range(state.sites) if a not in sites)
    marginal = np.sum(np.abs(phi) ** 2, axis=others) if others else np.abs(phi) ** 2
    return phi, marginal.reshape(-1)


def _dense_collapse(state: PureState, phi: np.ndarray, sites: list[int], outcome: tuple[int, ...],
                    prob: float, basis: Basis) -> PureState:
    idx = [slice(None)] * state.sites
    for s, v in zip(sites, outcome):
        idx[s] = v
    idx = tuple(idx)
    kept = np.zeros_like(phi)
    kept[idx] = phi[idx] / np.sqrt(prob)
    amps = _from_measurement_frame(kept, sites, basis, state.radix).reshape(-1)
    amps /= np.linalg.norm(amps)
    return PureState(state.radix, state.sites, amps)


def _product_frame(state: ProductState, sites: list[int], basis: Basis) -> np.ndarray:
    rows = state.amplitudes[sites]
    if basis is Basis.FOURIER:
        rows = rows @ fourier_matrix(state.radix).conj()
    return rows


def measure_sites(state: State, sites: Iterable[int], basis: Basis,
                  rng: np.random.Generator) -> tuple[DigitString, State]:
    """Born-rule measurement of ``sites`` in ``basis``.

    Returns the outcome (digits listed in ascending site order) and the
    renormalised post-measurement state, in the same representation as the
    input.
    """
    chosen = _normalize_sites(state, sites)
    d = state.radix
    if isinstance(state, ProductState):
        probs = np.clip(np.abs(_product_frame(state, chosen, basis)) ** 2, 0.0, 1.0)
        cdf = np.cumsum(probs, axis=1)
        u = rng.random(len(chosen)) * cdf[:, -1]
        outcome = np.minimum((cdf <= u[:, None]).sum(axis=1), d - 1)
        cols = _basis_columns(basis, d)
        amps = np.array(state.amplitudes)
        amps[chosen] = cols[:, outcome].T
        return DigitString(tuple(outcome.tolist()), d), ProductState._trusted(d, amps)

    phi, marginal = _dense_frame(state, chosen, basis)
    k = _sample_index(marginal, rng)
    outcome = DigitString.from_index(k, len(chosen), d)
    return outcome, _dense_collapse(state, phi, chosen, outcome.digits, float(marginal[k]), basis)


def outcome_distribution(state: State, sites: Iterable[int],
                         basis: Basis) -> dict[DigitString, tuple[float, State]]:
    """Every outcome with non-negligible probability, with its collapsed state."""
    chosen = _normalize_sites(state, sites)
    d = state.radix
    out: dict[DigitString, tuple[float, State]] = {}
    if isinstance(state, ProductState):
        probs = np.abs(_product_frame(state, chosen, basis)) ** 2
        supports = [[(v, float(p)) for v, p in enumerate(row) if p > _ZERO_PROB] for row in probs]
        cols = _basis_columns(basis, d)
        for branch in itertools.product(*supports):
            digits = tuple(v for v, _ in branch)
            prob = float(np.prod([p for _, p in branch]))
            amps = np.array(state.amplitudes)
            amps[chosen] = cols[:, list(digits)].T
            out[DigitString(digits, d)] = (prob, ProductState(d, amps))
        return out

    phi, marginal = _dense_frame(state, chosen, basis)
    for k in np.flatnonzero(marginal > _ZERO_PROB):
        outcome = DigitString.from_index(int(k), len(chosen), d)
        prob = float(marginal[k])
        out[outcome] = (prob, _dense_collapse(state, phi, chosen, outcome.digits, prob, basis))
    return out


def outcome_probabilities(state: State, sites: Iterable[int], basis: Basis) -> dict[DigitString, float]:
    """Like ``outcome_distribution`` without building the collapsed states."""
    chosen = _normalize_sites(state, sites)
    d = state.radix
    if isinstance(state, ProductState):
        probs = np.abs(_product_frame(state, chosen, basis)) ** 2
        supports = [[(v, float(p)) for v, p in enumerate(row) if p > _ZERO_PROB] for row in probs]
        out = {}
        for branch in itertools.product(*supports):
            prob = 1.0
            for _, p in branch:
                prob *= p
            out[DigitString(tuple(v for v, _ in branch), d)] = prob
        return out
    _, marginal = _dense_frame(state, chosen, basis)
    return {DigitString.from_index(int(k), len(chosen), d): float(marginal[k])
            for k in np.flatnonzero(marginal > _ZERO_PROB)}


def inner_product(a: State, b: State) -> complex:
    """<a|b>, conjugating the first argument."""
    if a.radix != b.radix or a.sites != b.sites:
        raise ValueError(f"dimension mismatch: {a.radix}^{a.sites} vs {b.radix}^{b.sites}")
    if isinstance(a, ProductState) and isinstance(b, ProductState):
        return complex(np.prod(np.sum(a.amplitudes.conj() * b.amplitudes, axis=1)))
    return complex(np.vdot(a.dense().amplitudes, b.dense().amplitudes))


def projective_check(state: State, target: State, rng: np.random.Generator) -> CheckResult:
    """Two-outcome measurement {|target><target|, 1 - |target><target|}."""
    p = min(max(abs(inner_product(target, state)) ** 2, 0.0), 1.0)
    return CheckResult.PASS if rng.random() < p else CheckResult.FAIL


# ---------------------------------------------------------------------------
# Randomness
# ---------------------------------------------------------------------------


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed) & (2**64 - 1)))


def split_rng(rng: np.random.Generator, n: int) -> list[np.random.Generator]:
    """Independent child generators.  Repeated calls yield fresh children."""
    return rng.spawn(n)
