"""
Randomized property-verification engine.

Provides:
- Inequality checkers returning margin reports (superadditivity,
  subadditivity, midpoint concavity, reciprocal concavity, scalar Dresher
  and mixed-Minkowski forms)
- A registry of named checkers with their proven exponent ranges
- Seeded, order-independent suite execution
- Counterexample search outside the proven ranges
"""

import hashlib
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from functools import lru_cache, partial
from typing import Any, Callable, Optional, Sequence

import numpy as np

from symineq import funcs, parsum
from symineq.config import (
    COUNTEREXAMPLE_FACTOR,
    DEFAULT_ENTRY_RANGE,
    DEFAULT_N_RANGE,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    DEFAULT_TRIALS,
    ELEM_P_GRID,
    HOM_P_GRID,
    MAX_DIM,
    PARSUM_P_GRID,
    RECIP_P_GRID,
    SEARCH_POLISH_STEPS,
    SEARCH_STEP,
)
from symineq.sympoly import DomainError, PositiveVector, VectorLike

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1


class ConfigError(ValueError):
    """A verification run was configured inconsistently."""


# =============================================================================
# Seeding
# =============================================================================


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@lru_cache(maxsize=256)
def key_hash(key: str) -> int:
    """Stable 64-bit hash of a checker key (unlike hash(), not salted per process)."""
    return int.from_bytes(hashlib.blake2b(key.encode("utf-8"), digest_size=8).digest(), "little")


def derive_seed(seed: int, key: str, index: int) -> int:
    """Mix (seed, key, index) into an independent 64-bit seed."""
    z = _splitmix64(seed & MASK64)
    z = _splitmix64(z ^ key_hash(key))
    return _splitmix64(z ^ (index & MASK64))


def trial_rng(seed: int, key: str, index: int) -> np.random.Generator:
    return np.random.default_rng(derive_seed(seed, key, index))


# =============================================================================
# Trial configuration
# =============================================================================


class DistKind(str, Enum):
    LOG_UNIFORM = "log-uniform"
    UNIFORM = "uniform"


@dataclass(frozen=True)
class EntryDistribution:
    """Distribution of the sampled vector entries."""

    kind: DistKind = DistKind.LOG_UNIFORM
    lo: float = DEFAULT_ENTRY_RANGE[0]
    hi: float = DEFAULT_ENTRY_RANGE[1]

    @classmethod
    def parse(cls, text: str) -> "EntryDistribution":
        """Parse 'log-uniform:LO:HI' or 'uniform:LO:HI'."""
        try:
            kind, lo, hi = text.split(":")
            dist = cls(DistKind(kind), float(lo), float(hi))
        except ValueError:
            raise ConfigError(f"distribution must look like log-uniform:LO:HI or uniform:LO:HI, got {text!r}") from None
        dist.validate()
        return dist

    def validate(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi) and self.lo < self.hi):
            raise ConfigError(f"distribution bounds must satisfy lo < hi, got [{self.lo}, {self.hi}]")
        if self.kind == DistKind.LOG_UNIFORM and self.lo <= 0:
            raise ConfigError(f"log-uniform needs lo > 0, got {self.lo}")
        if self.kind == DistKind.UNIFORM and self.lo < 0:
            raise ConfigError(f"uniform needs lo >= 0, got {self.lo}")

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == DistKind.LOG_UNIFORM:
            return np.exp(rng.uniform(math.log(self.lo), math.log(self.hi), size))
        return rng.uniform(self.lo, self.hi, size)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "lo": self.lo, "hi": self.hi}


class PolicyMode(str, Enum):
    ALL_VALID = "all"
    FIXED = "fixed"
    RANDOM = "random"


@dataclass(frozen=True)
class IndexPolicy:
    """How a trial picks k (or l) among the values valid for its n."""

    mode: PolicyMode = PolicyMode.RANDOM
    value: Optional[int] = None

    @classmethod
    def fixed(cls, value: int) -> "IndexPolicy":
        return cls(PolicyMode.FIXED, int(value))

    def choose(self, valid: Sequence[int], rng: np.random.Generator, trial_index: int) -> int:
        if not valid:
            raise ConfigError("no valid index for this trial")
        if self.mode == PolicyMode.FIXED:
            if self.value not in valid:
                raise ConfigError(f"fixed index {self.value} is not valid here (valid: {list(valid)})")
            return self.value
        if self.mode == PolicyMode.ALL_VALID:
            return valid[trial_index % len(valid)]
        return valid[int(rng.integers(len(valid)))]

    def to_dict(self) -> dict:
        return {"mode": self.mode.value, "value": self.value}


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of one verification run."""

    seed: int = DEFAULT_SEED
    trials: int = DEFAULT_TRIALS
    n_range: tuple[int, int] = DEFAULT_N_RANGE
    k_policy: IndexPolicy = field(default_factory=IndexPolicy)
    l_policy: IndexPolicy = field(default_factory=IndexPolicy)
    p_grid: Optional[tuple[float, ...]] = None
    distribution: EntryDistribution = field(default_factory=EntryDistribution)
    tolerance: float = DEFAULT_TOLERANCE
    headline: bool = False

    def validate(self) -> None:
        if not 0 <= self.seed <= MASK64:
            raise ConfigError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        lo, hi = self.n_range
        if not 1 <= lo <= hi <= MAX_DIM:
            raise ConfigError(f"n range must lie within [1, {MAX_DIM}], got {lo}..{hi}")
        if self.p_grid is not None and len(self.p_grid) == 0:
            raise ConfigError("p grid must not be empty")
        if not (self.tolerance >= 0 and math.isfinite(self.tolerance)):
            raise ConfigError(f"tolerance must be a finite nonnegative real, got {self.tolerance}")
        self.distribution.validate()

    def grid_for(self, checker: "Checker") -> tuple[float, ...]:
        if self.p_grid is None:
            return checker.default_p_grid
        if self.headline and checker.family == Family.HOM:
            try:
                return tuple(funcs.headline_exponent(q) for q in self.p_grid)
            except DomainError as e:
                raise ConfigError(str(e)) from None
        return tuple(self.p_grid)

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "n_range": list(self.n_range),
            "k_policy": self.k_policy.to_dict(),
            "l_policy": self.l_policy.to_dict(),
            "p_grid": None if self.p_grid is None else list(self.p_grid),
            "distribution": self.distribution.to_dict(),
            "tolerance": self.tolerance,
            "headline": self.headline,
        }


# =============================================================================
# Reports
# =============================================================================


@dataclass
class InequalityReport:
    """One trial: both sides, the oriented margin and the inputs that produced it."""

    checker_id: str
    inputs: dict[str, Any]
    lhs: float
    rhs: float
    margin: float
    passed: bool
    tolerance: float
    trial_index: int = -1

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.lhs), abs(self.rhs))

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "InequalityReport":
        return cls(**data)


def make_report(checker_id: str, inputs: dict, lhs: float, rhs: float, margin: float, tol: float) -> InequalityReport:
    """Build a report; it passes iff margin >= -tol * max(1, |lhs|, |rhs|)."""
    lhs, rhs, margin = float(lhs), float(rhs), float(margin)
    passed = margin >= -tol * max(1.0, abs(lhs), abs(rhs))
    return InequalityReport(checker_id, inputs, lhs, rhs, margin, bool(passed), tol)


def _pair(x: VectorLike, y: VectorLike) -> tuple[PositiveVector, PositiveVector]:
    x, y = PositiveVector.of(x), PositiveVector.of(y)
    if x.n != y.n:
        raise DomainError(f"x and y must have the same length, got {x.n} and {y.n}")
    return x, y


def _default_inputs(x: PositiveVector, y: PositiveVector) -> dict:
    return {"x": list(x.entries), "y": list(y.entries)}


def check_superadditive(
    f: Callable[[PositiveVector], float],
    x: VectorLike,
    y: VectorLike,
    tol: float = DEFAULT_TOLERANCE,
    checker_id: str = "superadditive",
    inputs: Optional[dict] = None,
) -> InequalityReport:
    """f(x + y) >= f(x) + f(y); margin = lhs - rhs."""
    x, y = _pair(x, y)
    lhs = f(x + y)
    rhs = f(x) + f(y)
    return make_report(checker_id, inputs or _default_inputs(x, y), lhs, rhs, lhs - rhs, tol)


def check_subadditive(
    f: Callable[[PositiveVector], float],
    x: VectorLike,
    y: VectorLike,
    tol: float = DEFAULT_TOLERANCE,
    checker_id: str = "subadditive",
    inputs: Optional[dict] = None,
) -> InequalityReport:
    """f(x + y) <= f(x) + f(y); margin = rhs - lhs."""
    x, y = _pair(x, y)
    lhs = f(x + y)
    rhs = f(x) + f(y)
    return make_report(checker_id, inputs or _default_inputs(x, y), lhs, rhs, rhs - lhs, tol)


def check_midpoint_concave(
    f: Callable[[np.ndarray], float],
    u: Sequence[float],
    v: Sequence[float],
    tol: float = DEFAULT_TOLERANCE,
    checker_id: str = "midpoint-concave",
) -> InequalityReport:
    """f((u + v)/2) >= (f(u) + f(v))/2; margin = lhs - rhs."""
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    lhs = f((u + v) / 2)
    rhs = (f(u) + f(v)) / 2
    return make_report(checker_id, {"u": u.tolist(), "v": v.tolist()}, lhs, rhs, lhs - rhs, tol)


def harmonic_mean(a: float, b: float) -> float:
    """H(a, b) = 2 (a : b); H(a, a) == a exactly."""
    return 2.0 * parsum.par_sum(a, b)


def check_recip_concave(
    x: VectorLike,
    y: VectorLike,
    k: int,
    p: float,
    tol: float = DEFAULT_TOLERANCE,
    checker_id: str = "recip-ek",
    inputs: Optional[dict] = None,
) -> InequalityReport:
    """e_k(((x+y)/2)^p) <= H(e_k(x^p), e_k(y^p)), proven for p in (-1, 0) with k|p| <= 1; margin = rhs - lhs."""
    x, y = _pair(x, y)
    x, y = x.strict(), y.strict()
    mid = PositiveVector.of((x.as_array() + y.as_array()) / 2)
    lhs = funcs.elem_sym_power(mid, k, p)
    fx = funcs.elem_sym_power(x, k, p)
    fy = funcs.elem_sym_power(y, k, p)
    rhs = harmonic_mean(fx, fy)
    return make_report(checker_id, inputs or _default_inputs(x, y), lhs, rhs, rhs - lhs, tol)


class DresherForm(str, Enum):
    RATIO = "ratio"  # denominator (a+b)^p + (c+d)^p, exponent 1/(p(k-1))
    DRESHER = "dresher"  # denominator a^p+b^p+c^p+d^p, exponent 1/(k-1)


def check_dresher_scalar(
    a: float,
    b: float,
    c: float,
    d: float,
    k: int,
    p: float,
    tol: float = DEFAULT_TOLERANCE,
    form: DresherForm = DresherForm.RATIO,
    checker_id: str = "dresher",
) -> InequalityReport:
    """
    Scalar power-ratio inequality underlying h_k/h_1 subadditivity.

    [((a^p+b^p)^k + (c^p+d^p)^k) / D]^e <= [(a^pk+c^pk)/(a^p+c^p)]^e + [(b^pk+d^pk)/(b^p+d^p)]^e
    A pair that is entirely zero contributes 0 (its limit).
    """
    if isinstance(k, bool) or int(k) != k or k < 2:
        raise DomainError(f"k must be an integer >= 2, got {k!r}")
    if not (math.isfinite(p) and p > 0):
        raise DomainError(f"p must be a finite positive real, got {p!r}")
    values = (a, b, c, d)
    if any(not math.isfinite(v) or v < 0 for v in values):
        raise DomainError(f"a, b, c, d must be finite and nonnegative, got {values}")
    if not any(values):
        raise DomainError("a, b, c, d must not all be zero")
    form = DresherForm(form)
    e = 1.0 / (p * (k - 1)) if form == DresherForm.RATIO else 1.0 / (k - 1)

    def term(u: float, v: float) -> float:
        den = u**p + v**p
        return 0.0 if den == 0 else ((u ** (p * k) + v ** (p * k)) / den) ** e

    num = (a**p + b**p) ** k + (c**p + d**p) ** k
    if form == DresherForm.RATIO:
        den = (a + b) ** p + (c + d) ** p
    else:
        den = a**p + b**p + c**p + d**p
    lhs = (num / den) ** e
    rhs = term(a, c) + term(b, d)
    inputs = {"a": a, "b": b, "c": c, "d": d, "k": int(k), "p": p, "form": form.value}
    return make_report(checker_id, inputs, lhs, rhs, rhs - lhs, tol)


def _mixed_norm(m: np.ndarray, k: int, p: float) -> float:
    return float(np.sum(np.sum(m**p, axis=1) ** k) ** (1.0 / (p * k)))


def check_mixed_minkowski(
    xmat: Sequence[Sequence[float]],
    ymat: Sequence[Sequence[float]],
    k: int,
    p: float,
    tol: float = DEFAULT_TOLERANCE,
    checker_id: str = "mixed-minkowski",
) -> InequalityReport:
    """
    Mixed-norm Minkowski inequality, N(x + y) <= N(x) + N(y) with
    N(m) = [sum_i (sum_j m_ij^p)^k]^(1/(pk)).
    """
    x, y = np.asarray(xmat, dtype=float), np.asarray(ymat, dtype=float)
    if x.ndim != 2 or x.shape != y.shape:
        raise DomainError(f"matrices must be 2-D with equal shapes, got {x.shape} and {y.shape}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))) or (x < 0).any() or (y < 0).any():
        raise DomainError("matrix entries must be finite and nonnegative")
    if isinstance(k, bool) or int(k) != k or k < 1:
        raise DomainError(f"k must be an integer >= 1, got {k!r}")
    if not (math.isfinite(p) and p > 0):
        raise DomainError(f"p must be a finite positive real, got {p!r}")
    lhs = _mixed_norm(x + y, int(k), p)
    rhs = _mixed_norm(x, int(k), p) + _mixed_norm(y, int(k), p)
    inputs = {"xmat": x.tolist(), "ymat": y.tolist(), "k": int(k), "p": p}
    return make_report(checker_id, inputs, lhs, rhs, rhs - lhs, tol)


# =============================================================================
# Checker registry
# =============================================================================


class Family(str, Enum):
    ELEM = "elem"
    HOM = "hom"
    RECIP = "recip"
    PARSUM = "parsum"
    MATRIX = "matrix"


@dataclass(frozen=True)
class TrialParams:
    n: int
    k: int
    l: int
    p: float


Sampler = Callable[[np.random.Generator, TrialParams, EntryDistribution], dict]
Evaluator = Callable[[dict, float], InequalityReport]


def _any_k(k: int, p: float) -> bool:
    return True


@dataclass(frozen=True)
class Checker:
    """
    A named inequality together with its sampler and proven range.

    The inequality is proven at (k, p) iff proven(p) and proven_k(k, p).
    """

    checker_id: str
    description: str
    family: Family
    default_p_grid: tuple[float, ...]
    proven: Callable[[float], bool]
    valid_ks: Callable[[int], Sequence[int]]
    sample: Sampler
    evaluate: Evaluator
    uses_k: bool = True
    uses_l: bool = False
    variable_keys: tuple[str, ...] = ()
    proven_k: Callable[[int, float], bool] = _any_k

    def proven_at(self, k: int, p: float) -> bool:
        return self.proven(p) and self.proven_k(k, p)


CHECKERS: dict[str, Checker] = {}


def register_checker(checker: Checker) -> Checker:
    CHECKERS[checker.checker_id] = checker
    return checker


def get_checker(checker_id: str) -> Checker:
    try:
        return CHECKERS[checker_id]
    except KeyError:
        known = ", ".join(sorted(CHECKERS))
        raise ConfigError(f"unknown checker id {checker_id!r} (known: {known})") from None


def _ks_upto_n(n: int) -> range:
    return range(1, n + 1)


def _ks_from_two(n: int) -> range:
    return range(2, max(n, 2) + 1)


def _vector_sampler(rng: np.random.Generator, params: TrialParams, dist: EntryDistribution) -> dict:
    inputs: dict[str, Any] = {"n": params.n, "k": params.k, "l": params.l, "p": params.p}
    inputs["x"] = dist.sample(rng, params.n).tolist()
    inputs["y"] = dist.sample(rng, params.n).tolist()
    return inputs


def _scalar_sampler(rng: np.random.Generator, params: TrialParams, dist: EntryDistribution) -> dict:
    a, b, c, d = dist.sample(rng, 4).tolist()
    return {"a": a, "b": b, "c": c, "d": d, "k": params.k, "p": params.p}


def _matrix_sampler(rng: np.random.Generator, params: TrialParams, dist: EntryDistribution) -> dict:
    cols = int(rng.integers(1, 4, endpoint=True))
    return {
        "xmat": dist.sample(rng, (params.n, cols)).tolist(),
        "ymat": dist.sample(rng, (params.n, cols)).tolist(),
        "k": params.k,
        "p": params.p,
    }


def _additive(checker_id: str, functional: Callable[[PositiveVector, dict], float], superadditive: bool) -> Evaluator:
    check = check_superadditive if superadditive else check_subadditive

    def evaluate(inputs: dict, tol: float) -> InequalityReport:
        return check(lambda v: functional(v, inputs), inputs["x"], inputs["y"], tol, checker_id, inputs)

    return evaluate


def _ml_orig(v: PositiveVector, inputs: dict) -> float:
    # p = 1 is the classical ratio; other p evaluate phi
    if inputs["p"] == 1.0:
        return funcs.ml_ratio(v, inputs["k"])
    return funcs.phi(v, inputs["k"], inputs["p"])


def _eval_recip(inputs: dict, tol: float) -> InequalityReport:
    return check_recip_concave(inputs["x"], inputs["y"], inputs["k"], inputs["p"], tol, "recip-ek", inputs)


def _eval_dresher(inputs: dict, tol: float) -> InequalityReport:
    args = (inputs["a"], inputs["b"], inputs["c"], inputs["d"], inputs["k"], inputs["p"], tol)
    reports = [check_dresher_scalar(*args, form=form) for form in DresherForm]
    return min(reports, key=lambda r: r.margin / r.scale)


def _eval_minkowski(inputs: dict, tol: float) -> InequalityReport:
    return check_mixed_minkowski(inputs["xmat"], inputs["ymat"], inputs["k"], inputs["p"], tol)


def _register_vector_checkers() -> None:
    elem = lambda p: 0.0 < p <= 1.0  # noqa: E731
    hom = lambda p: p >= 1.0  # noqa: E731
    vec = ("x", "y")

    # ml-orig and hk-mcleod evaluate phi and hom_root away from p = 1, so
    # they carry the proven range of those functionals
    register_checker(Checker(
        "ml-orig", "Marcus-Lopes: e_k/e_{k-1} is superadditive", Family.ELEM, (1.0,),
        elem, _ks_upto_n, _vector_sampler,
        _additive("ml-orig", _ml_orig, True), variable_keys=vec,
    ))
    register_checker(Checker(
        "ml-new", "[e_k(x^p)/e_{k-1}(x^p)]^(1/p) is superadditive", Family.ELEM, ELEM_P_GRID,
        elem, _ks_upto_n, _vector_sampler,
        _additive("ml-new", lambda v, i: funcs.phi(v, i["k"], i["p"]), True), variable_keys=vec,
    ))
    register_checker(Checker(
        "ek-root", "[e_k(x^p)]^(1/(pk)) is superadditive", Family.ELEM, ELEM_P_GRID,
        elem, _ks_upto_n, _vector_sampler,
        _additive("ek-root", lambda v, i: funcs.elem_root(v, i["k"], i["p"]), True), variable_keys=vec,
    ))
    register_checker(Checker(
        "big-phi", "[e_k(x^p)/e_{k-l}(x^p)]^(1/(lp)) is superadditive", Family.ELEM, ELEM_P_GRID,
        elem, _ks_upto_n, _vector_sampler,
        _additive("big-phi", lambda v, i: funcs.big_phi(v, i["k"], i["l"], i["p"]), True),
        uses_l=True, variable_keys=vec,
    ))
    register_checker(Checker(
        "multi-ppsum", "[x_1^p : ... : x_n^p]^(1/p) is superadditive", Family.PARSUM, PARSUM_P_GRID,
        lambda p: p > 0.0, lambda n: (0,), _vector_sampler,
        _additive("multi-ppsum", lambda v, i: parsum.multi_p_par_sum(v, i["p"]), True),
        uses_k=False, variable_keys=vec,
    ))
    register_checker(Checker(
        "hk-mcleod", "[h_k(x)]^(1/k) is subadditive", Family.HOM, (1.0,),
        hom, _ks_upto_n, _vector_sampler,
        _additive("hk-mcleod", lambda v, i: funcs.hom_root(v, i["k"], i["p"]), False), variable_keys=vec,
    ))
    register_checker(Checker(
        "hk-root", "[h_k(x^p)]^(1/(pk)) is subadditive", Family.HOM, HOM_P_GRID,
        hom, _ks_upto_n, _vector_sampler,
        _additive("hk-root", lambda v, i: funcs.hom_root(v, i["k"], i["p"]), False), variable_keys=vec,
    ))
    register_checker(Checker(
        "hk-ratio", "[h_k(x^p)/h_1(x^p)]^(1/(p(k-1))) is subadditive", Family.HOM, HOM_P_GRID,
        hom, _ks_from_two, _vector_sampler,
        _additive("hk-ratio", lambda v, i: funcs.hom_ratio(v, i["k"], i["p"]), False), variable_keys=vec,
    ))
    register_checker(Checker(
        "recip-ek", "e_k(x^p) is reciprocally concave (harmonic-mean bound)", Family.RECIP, RECIP_P_GRID,
        lambda p: -1.0 < p < 0.0, _ks_upto_n, _vector_sampler, _eval_recip, variable_keys=vec,
        proven_k=funcs.recip_proven,
    ))
    register_checker(Checker(
        "dresher", "scalar power-ratio and Dresher inequalities", Family.HOM, HOM_P_GRID,
        hom, _ks_from_two, _scalar_sampler, _eval_dresher, variable_keys=("a", "b", "c", "d"),
    ))
    register_checker(Checker(
        "mixed-minkowski", "mixed-norm Minkowski inequality", Family.HOM, HOM_P_GRID,
        hom, _ks_upto_n, _matrix_sampler, _eval_minkowski, variable_keys=("xmat", "ymat"),
    ))


_register_vector_checkers()

VECTOR_SUITE = (
    "ml-orig",
    "ml-new",
    "ek-root",
    "big-phi",
    "multi-ppsum",
    "hk-mcleod",
    "hk-root",
    "hk-ratio",
    "recip-ek",
    "dresher",
    "mixed-minkowski",
)


def replay(report: InequalityReport, tol: Optional[float] = None) -> InequalityReport:
    """Re-evaluate a recorded trial from its inputs alone."""
    checker = get_checker(report.checker_id)
    again = checker.evaluate(report.inputs, report.tolerance if tol is None else tol)
    again.trial_index = report.trial_index
    return again


# =============================================================================
# Suite execution
# =============================================================================


@dataclass
class CheckerSummary:
    """Pass counts and worst margin of one checker."""

    checker_id: str
    trials: int = 0
    passes: int = 0
    worst_margin: float = math.inf
    worst_trial_index: int = -1

    def add(self, report: InequalityReport) -> None:
        self.trials += 1
        self.passes += int(report.passed)
        if (report.margin, report.trial_index) < (self.worst_margin, self.worst_trial_index) or self.worst_trial_index < 0:
            self.worst_margin = report.margin
            self.worst_trial_index = report.trial_index

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "passes": self.passes,
            "worst_margin": self.worst_margin,
            "worst_trial_index": self.worst_trial_index,
        }


@dataclass
class SuiteSummary:
    """Per-checker summaries plus the full report of every violation."""

    checkers: dict[str, CheckerSummary] = field(default_factory=dict)
    violations: list[InequalityReport] = field(default_factory=list)

    @property
    def violation_count(self) -> int:
        return len(self.violations)

    def merge(self, other: "SuiteSummary") -> None:
        self.checkers.update(other.checkers)
        self.violations.extend(other.violations)

    def to_dict(self) -> dict:
        return {key: s.to_dict() for key, s in self.checkers.items()}


def _valid_ks(checker: Checker, n: int, config: TrialConfig, p: float) -> list[int]:
    ks = [k for k in checker.valid_ks(n) if checker.proven_k(k, p)]
    if checker.uses_l and config.l_policy.mode == PolicyMode.FIXED:
        ks = [k for k in ks if k >= config.l_policy.value]
    return ks


def _validate_for_checker(config: TrialConfig, checker: Checker, grid: Sequence[float]) -> None:
    for p in grid:
        if not checker.proven(p):
            raise ConfigError(f"p = {p} is outside the proven range of {checker.checker_id}")
    if not checker.uses_k:
        return
    lo, hi = config.n_range
    for p in grid:
        for n in range(lo, hi + 1):
            ks = _valid_ks(checker, n, config, p)
            if not ks:
                raise ConfigError(f"{checker.checker_id}: no valid k for n = {n} at p = {p}")
            if config.k_policy.mode == PolicyMode.FIXED and config.k_policy.value not in ks:
                raise ConfigError(f"{checker.checker_id}: k = {config.k_policy.value} is not valid for n = {n} at p = {p}")


def _run_trial(config: TrialConfig, checker: Checker, key: str, job: tuple[float, int]) -> InequalityReport:
    p, trial_index = job
    rng = trial_rng(config.seed, key, trial_index)
    lo, hi = config.n_range
    n = int(rng.integers(lo, hi, endpoint=True))
    k = config.k_policy.choose(_valid_ks(checker, n, config, p), rng, trial_index) if checker.uses_k else 0
    l = config.l_policy.choose(range(1, k + 1), rng, trial_index) if checker.uses_l else 1
    inputs = checker.sample(rng, TrialParams(n, k, l, p), config.distribution)
    report = checker.evaluate(inputs, config.tolerance)
    report.trial_index = trial_index
    if not report.passed:
        logger.warning(f"{key} trial {trial_index}: violation, margin {report.margin:.3e}")
    return report


def run_suite(
    config: TrialConfig,
    checker_ids: Sequence[str],
    threads: int = 1,
    key_suffix: str = "",
) -> SuiteSummary:
    """
    Run `trials` independent trials per checker per p-grid point.

    Each trial draws from its own generator seeded by (seed, checker key,
    trial index), so the summary is identical for any thread count.
    """
    config.validate()
    checkers = [get_checker(cid) for cid in checker_ids]
    summary = SuiteSummary()
    for checker in checkers:
        grid = config.grid_for(checker)
        _validate_for_checker(config, checker, grid)
        key = checker.checker_id + key_suffix
        jobs = [(p, i * config.trials + t) for i, p in enumerate(grid) for t in range(config.trials)]
        run = partial(_run_trial, config, checker, key)
        logger.info(f"Running {key}: {len(jobs)} trials over p-grid {list(grid)} with {threads} thread(s)")

        stats = CheckerSummary(key)
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                reports = pool.map(run, jobs)
                for report in reports:
                    _collect(stats, summary, report)
        else:
            for job in jobs:
                _collect(stats, summary, run(job))
        summary.checkers[key] = stats
        logger.info(f"{key}: {stats.passes}/{stats.trials} passed, worst margin {stats.worst_margin:.3e}")
    return summary


def _collect(stats: CheckerSummary, summary: SuiteSummary, report: InequalityReport) -> None:
    stats.add(report)
    if not report.passed:
        summary.violations.append(report)


# =============================================================================
# Counterexample search
# =============================================================================


@dataclass(frozen=True)
class SearchRegion:
    """Fixed parameters of a counterexample search; (k, p) must lie outside the proven range."""

    p: float
    n: int = 2
    k: Optional[int] = None
    l: Optional[int] = None
    distribution: EntryDistribution = field(default_factory=EntryDistribution)


def is_strict_violation(report: InequalityReport, tol: float) -> bool:
    return report.margin < -COUNTEREXAMPLE_FACTOR * tol * report.scale


def _map_variables(inputs: dict, keys: Sequence[str], fn: Callable[[np.ndarray], np.ndarray]) -> dict:
    out = dict(inputs)
    for key in keys:
        out[key] = fn(np.asarray(inputs[key], dtype=float)).tolist()
    return out


def _normalize(inputs: dict, keys: Sequence[str]) -> dict:
    # every checker is homogeneous, so rescaling never changes the verdict
    top = max(float(np.max(inputs[key])) for key in keys)
    return _map_variables(inputs, keys, lambda a: a / top)


def _perturb(inputs: dict, keys: Sequence[str], rng: np.random.Generator) -> dict:
    return _map_variables(inputs, keys, lambda a: a * np.exp(SEARCH_STEP * rng.standard_normal(a.shape)))


def _resolve_region(checker: Checker, region: SearchRegion) -> TrialParams:
    if not 1 <= region.n <= MAX_DIM:
        raise DomainError(f"n must lie within [1, {MAX_DIM}], got {region.n}")
    if not checker.variable_keys:
        raise DomainError(f"{checker.checker_id} does not support counterexample search")
    ks = list(checker.valid_ks(region.n)) if checker.uses_k else [0]
    if region.k is None:
        open_ks = [k for k in ks if not checker.proven_at(k, region.p)]
        k = open_ks[0] if open_ks else ks[0]
    else:
        k = region.k
    if k not in ks:
        raise DomainError(f"k = {k} is not valid for {checker.checker_id} at n = {region.n}")
    if checker.proven_at(k, region.p):
        raise DomainError(
            f"(k = {k}, p = {region.p}) lies inside the proven range of {checker.checker_id}; "
            "a violation there would be mislabeled as a counterexample"
        )
    l = 1 if region.l is None else region.l
    if checker.uses_l and not 1 <= l <= k:
        raise DomainError(f"l must satisfy 1 <= l <= k = {k}, got {l}")
    region.distribution.validate()
    return TrialParams(region.n, k, l, region.p)


def search_counterexample(
    checker_id: str,
    region: SearchRegion,
    budget: int,
    seed: int,
    tol: float = DEFAULT_TOLERANCE,
) -> Optional[InequalityReport]:
    """
    Random search with multiplicative refinement for a strict violation.

    Even steps draw a fresh candidate, odd steps perturb the best one seen so
    far. The first strict violation is polished within the remaining budget
    and returned; None when the budget runs out.
    """
    checker = get_checker(checker_id)
    params = _resolve_region(checker, region)
    keys = checker.variable_keys
    rng = trial_rng(seed, f"search:{checker_id}", 0)

    best: Optional[InequalityReport] = None
    best_score = math.inf
    for step in range(budget):
        if best is None or step % 2 == 0:
            inputs = checker.sample(rng, params, region.distribution)
        else:
            inputs = _perturb(best.inputs, keys, rng)
        report = checker.evaluate(_normalize(inputs, keys), tol)
        report.trial_index = step
        score = report.margin / report.scale
        if score < best_score:
            best, best_score = report, score
        if is_strict_violation(report, tol):
            logger.info(f"{checker_id}: violation at step {step}, margin {report.margin:.3e}")
            return _polish(checker, report, rng, tol, min(SEARCH_POLISH_STEPS, budget - step - 1))

    logger.info(f"{checker_id}: no violation in {budget} steps (best normalized margin {best_score:.3e})")
    return None


def _polish(checker: Checker, report: InequalityReport, rng: np.random.Generator, tol: float, steps: int) -> InequalityReport:
    best, best_score = report, report.margin / report.scale
    for _ in range(steps):
        candidate = checker.evaluate(_normalize(_perturb(best.inputs, checker.variable_keys, rng), checker.variable_keys), tol)
        candidate.trial_index = report.trial_index
        score = candidate.margin / candidate.scale
        if score < best_score:
            best, best_score = candidate, score
    return best
