"""
Symmetric polynomial kernels.

Provides:
- Elementary symmetric polynomials e_k (raw and log domain)
- Complete homogeneous symmetric polynomials h_k (raw and log domain)
- Elementwise power transforms of nonnegative vectors
- Brute-force enumeration oracles for differential testing
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Union

import numpy as np

from symineq.config import BRUTE_MAX_N, BRUTE_MAX_TERMS

logger = logging.getLogger(__name__)


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class EnumerationLimitError(DomainError):
    """A brute-force oracle refused an enumeration that is too large."""


@dataclass(frozen=True)
class PositiveVector:
    """Finite vector of nonnegative reals (the x, y of every inequality)."""

    entries: tuple[float, ...]

    def __post_init__(self):
        if len(self.entries) < 1:
            raise DomainError("vector must have at least one entry")
        for v in self.entries:
            if not math.isfinite(v):
                raise DomainError(f"vector entries must be finite, got {v!r}")
            if v < 0:
                raise DomainError(f"vector entries must be nonnegative, got {v!r}")

    @classmethod
    def of(cls, values: "VectorLike") -> "PositiveVector":
        """Coerce a sequence (or an existing vector) to a PositiveVector."""
        if isinstance(values, PositiveVector):
            return values
        return cls(tuple(float(v) for v in np.ravel(np.asarray(values, dtype=float))))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def is_strict(self) -> bool:
        """True when every entry is strictly positive."""
        return all(v > 0 for v in self.entries)

    def strict(self) -> "PositiveVector":
        """Return self, raising DomainError if any entry is zero."""
        if not self.is_strict:
            raise DomainError("vector entries must be strictly positive")
        return self

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[float]:
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __add__(self, other: "PositiveVector") -> "PositiveVector":
        other = PositiveVector.of(other)
        if other.n != self.n:
            raise DomainError(f"length mismatch: {self.n} vs {other.n}")
        return PositiveVector(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def scale(self, t: float) -> "PositiveVector":
        return PositiveVector(tuple(t * v for v in self.entries))

    def drop(self, j: int) -> "PositiveVector":
        """The vector with coordinate j omitted (x_[j])."""
        return PositiveVector(self.entries[:j] + self.entries[j + 1 :])


VectorLike = Union[PositiveVector, Iterable[float], np.ndarray]


@dataclass(frozen=True)
class LogValue:
    """Nonnegative real r stored as ln r, with an explicit flag for r = 0."""

    log_magnitude: float
    zero_flag: bool = False

    @classmethod
    def from_log(cls, log_r: float) -> "LogValue":
        if log_r == -math.inf:
            return cls(-math.inf, True)
        return cls(float(log_r), False)

    @classmethod
    def from_value(cls, r: float) -> "LogValue":
        if r < 0 or not math.isfinite(r):
            raise DomainError(f"LogValue needs a finite nonnegative real, got {r!r}")
        if r == 0:
            return cls(-math.inf, True)
        return cls(math.log(r), False)

    def value(self) -> float:
        """exp of the stored log (inf when it overflows double range)."""
        if self.zero_flag:
            return 0.0
        try:
            return math.exp(self.log_magnitude)
        except OverflowError:
            return math.inf

    @property
    def log(self) -> float:
        return -math.inf if self.zero_flag else self.log_magnitude

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue.from_log(self.log + other.log)

    def __add__(self, other: "LogValue") -> "LogValue":
        return LogValue.from_log(float(np.logaddexp(self.log, other.log)))


def _check_k(n: int, k: int) -> None:
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"k must be an integer, got {k!r}")
    if k < 0 or k > n:
        raise DomainError(f"k must satisfy 0 <= k <= n = {n}, got k = {k}")


def _check_hom_k(k: int) -> None:
    if isinstance(k, bool) or int(k) != k:
        raise DomainError(f"k must be an integer, got {k!r}")
    if k < 0:
        raise DomainError(f"k must be nonnegative, got k = {k}")


def _logs(x: PositiveVector) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(x.as_array())


# =============================================================================
# Elementary symmetric polynomials
# =============================================================================


def elem_sym_all(x: VectorLike, k: int) -> np.ndarray:
    """
    Compute e_0(x), ..., e_k(x) in one pass.

    Uses E_j <- E_j + x_m * E_{j-1}; every term is nonnegative so there is
    no cancellation.
    """
    x = PositiveVector.of(x)
    _check_k(x.n, k)
    return np.array(elem_sym_raw(x.entries, k))


def elem_sym_raw(values: Iterable[float], k: int) -> list[float]:
    """
    e_0 .. e_k of finite nonnegative floats, without validation.

    Descending j so that E_{j-1} is still the old prefix when E_j is updated.
    """
    e = [1.0] + [0.0] * k
    for xm in values:
        for j in range(k, 0, -1):
            e[j] += xm * e[j - 1]
    return e


def elem_sym(x: VectorLike, k: int) -> float:
    """Elementary symmetric polynomial e_k(x); e_0 = 1."""
    return float(elem_sym_all(x, k)[k])


def elem_sym_log_all(x: VectorLike, k: int) -> np.ndarray:
    """log e_0(x), ..., log e_k(x) via the same recurrence in log space."""
    x = PositiveVector.of(x)
    _check_k(x.n, k)
    le = np.full(k + 1, -np.inf)
    le[0] = 0.0
    for lx in _logs(x):
        le[1:] = np.logaddexp(le[1:], lx + le[:-1])
    return le


def elem_sym_log(x: VectorLike, k: int) -> LogValue:
    """Overflow-safe e_k(x) as a LogValue."""
    return LogValue.from_log(float(elem_sym_log_all(x, k)[k]))


# =============================================================================
# Complete homogeneous symmetric polynomials
# =============================================================================


def complete_hom_all(x: VectorLike, k: int) -> np.ndarray:
    """
    Compute h_0(x), ..., h_k(x).

    h_j(x_1..x_m) = h_j(x_1..x_{m-1}) + x_m * h_{j-1}(x_1..x_m), ascending j
    so that h_{j-1} already includes x_m.
    """
    x = PositiveVector.of(x)
    _check_hom_k(k)
    return np.array(complete_hom_raw(x.entries, k))


def complete_hom_raw(values: Iterable[float], k: int) -> list[float]:
    """h_0 .. h_k of finite nonnegative floats, without validation."""
    h = [1.0] + [0.0] * k
    for xm in values:
        for j in range(1, k + 1):
            h[j] += xm * h[j - 1]
    return h


def complete_hom(x: VectorLike, k: int) -> float:
    """Complete homogeneous symmetric polynomial h_k(x); h_0 = 1."""
    return float(complete_hom_all(x, k)[k])


def complete_hom_log_all(x: VectorLike, k: int) -> np.ndarray:
    """log h_0(x), ..., log h_k(x)."""
    x = PositiveVector.of(x)
    _check_hom_k(k)
    lh = np.full(k + 1, -np.inf)
    lh[0] = 0.0
    for lx in _logs(x):
        for j in range(1, k + 1):
            lh[j] = np.logaddexp(lh[j], lx + lh[j - 1])
    return lh


def complete_hom_log(x: VectorLike, k: int) -> LogValue:
    """Overflow-safe h_k(x) as a LogValue."""
    return LogValue.from_log(float(complete_hom_log_all(x, k)[k]))


def newton_residual(x: VectorLike, k: int) -> tuple[float, float]:
    """
    Evaluate sum_{i=0}^{k} (-1)^i e_i(x) h_{k-i}(x).

    Returns:
        Tuple of (residual, largest summand magnitude); the residual is zero
        in exact arithmetic for 1 <= k <= n.
    """
    x = PositiveVector.of(x)
    e = elem_sym_all(x, k)
    h = complete_hom_all(x, k)
    terms = [(-1) ** i * e[i] * h[k - i] for i in range(k + 1)]
    return math.fsum(terms), max(abs(t) for t in terms)


# =============================================================================
# Power transform
# =============================================================================


def power_vec(x: VectorLike, p: float) -> PositiveVector:
    """Elementwise power x^p; zero entries are only allowed for p > 0."""
    x = PositiveVector.of(x)
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p!r}")
    if p <= 0 and not x.is_strict:
        raise DomainError(f"zero entry cannot be raised to p = {p} <= 0")
    try:
        return PositiveVector(tuple(v**p for v in x.entries))
    except OverflowError:
        raise DomainError(f"x^{p} overflows; use the log-domain functionals") from None


# =============================================================================
# Brute-force oracles
# =============================================================================


def brute_elem_sym(x: VectorLike, k: int) -> float:
    """e_k(x) by explicit subset enumeration (n <= 16)."""
    x = PositiveVector.of(x)
    if x.n > BRUTE_MAX_N:
        raise EnumerationLimitError(f"subset enumeration refused for n = {x.n} > {BRUTE_MAX_N}")
    _check_k(x.n, k)
    return math.fsum(math.prod(s) for s in itertools.combinations(x.entries, k))


def brute_complete_hom(x: VectorLike, k: int) -> float:
    """h_k(x) by enumerating nondecreasing index tuples i_1 <= ... <= i_k."""
    x = PositiveVector.of(x)
    _check_hom_k(k)
    terms = math.comb(x.n + k - 1, k)
    if terms > BRUTE_MAX_TERMS:
        raise EnumerationLimitError(f"multiset enumeration refused: {terms} terms > {BRUTE_MAX_TERMS}")
    return math.fsum(math.prod(s) for s in itertools.combinations_with_replacement(x.entries, k))
