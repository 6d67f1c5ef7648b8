"""
Matrix extensions of the e_k inequalities via spectra.

Provides:
- Symmetric / tall matrix value types and a cyclic Jacobi eigen-solver
- Spectral matrix powers and e_k(lambda(X^p)) in the log domain
- Checkers for log-convexity under congruence and reciprocal concavity
- Random SPD and full-rank tall matrix generators
"""

import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from symineq import funcs
from symineq.config import (
    DEFAULT_SPECTRUM_RANGE,
    JACOBI_MAX_SWEEPS,
    JACOBI_OFF_TOL,
    MATRIX_TOLERANCE,
    MAX_DIM,
)
from symineq.sympoly import DomainError, LogValue
from symineq.verify import (
    Checker,
    ConfigError,
    EntryDistribution,
    Family,
    IndexPolicy,
    InequalityReport,
    PolicyMode,
    SuiteSummary,
    TrialConfig,
    TrialParams,
    make_report,
    register_checker,
    run_suite,
)

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
SYMMETRY_TOL = 1e-12


class MatrixError(DomainError):
    """A matrix is not symmetric, not positive definite or not of full rank."""


class ConvergenceError(RuntimeError):
    """The Jacobi iteration did not reach the off-diagonal tolerance."""


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Real symmetric dim x dim matrix (dim <= 64), stored read-only."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise MatrixError(f"expected a non-empty square matrix, got shape {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise MatrixError(f"dimension {a.shape[0]} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(a)):
            raise MatrixError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > SYMMETRY_TOL * scale:
            raise MatrixError("matrix is not symmetric")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @cached_property
    def eigenvalues(self) -> np.ndarray:
        return jacobi_eigenvalues(self)

    @property
    def is_pd(self) -> bool:
        return bool(self.eigenvalues[0] > 0)

    def require_pd(self) -> "SymMatrix":
        if not self.is_pd:
            raise MatrixError(f"matrix is not positive definite (smallest eigenvalue {self.eigenvalues[0]:.3e})")
        return self

    def midpoint(self, other: "SymMatrix") -> "SymMatrix":
        if other.dim != self.dim:
            raise MatrixError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return SymMatrix((self.entries + other.entries) / 2)

    def tolist(self) -> list:
        return self.entries.tolist()


@dataclass(frozen=True, eq=False)
class TallMatrix:
    """rows x cols matrix with cols <= rows and full column rank."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[1] < 1 or a.shape[1] > a.shape[0]:
            raise MatrixError(f"expected rows >= cols >= 1, got shape {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise MatrixError(f"row count {a.shape[0]} exceeds {MAX_DIM}")
        if not np.all(np.isfinite(a)):
            raise MatrixError("matrix entries must be finite")
        gram = jacobi_eigenvalues(SymMatrix(a.T @ a))
        if gram[0] <= RANK_TOL * gram[-1]:
            raise MatrixError("matrix does not have full column rank")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]


# =============================================================================
# Eigen-solver
# =============================================================================


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int, c: float, s: float) -> None:
    ap, aq = a[:, p].copy(), a[:, q].copy()
    a[:, p] = c * ap - s * aq
    a[:, q] = s * ap + c * aq
    ap, aq = a[p, :].copy(), a[q, :].copy()
    a[p, :] = c * ap - s * aq
    a[q, :] = s * ap + c * aq
    a[p, q] = a[q, p] = 0.0
    vp, vq = v[:, p].copy(), v[:, q].copy()
    v[:, p] = c * vp - s * vq
    v[:, q] = s * vp + c * vq


def _off_norm(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def jacobi_eigh(x: SymMatrix) -> tuple[np.ndarray, np.ndarray]:
    """
    Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns:
        Tuple of (ascending eigenvalues, orthogonal eigenvector columns)

    Raises:
        ConvergenceError: off-diagonal mass still above tolerance after the
            sweep limit
    """
    a = np.array(x.entries, dtype=float)
    n = a.shape[0]
    v = np.eye(n)
    target = JACOBI_OFF_TOL * float(np.linalg.norm(a))

    for sweep in range(JACOBI_MAX_SWEEPS + 1):
        off = _off_norm(a)
        if off <= target:
            break
        if sweep == JACOBI_MAX_SWEEPS:
            raise ConvergenceError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps (off-norm {off:.3e})")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                _rotate(a, v, p, q, c, t * c)

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def jacobi_eigenvalues(x: SymMatrix) -> np.ndarray:
    return jacobi_eigh(x)[0]


def matrix_power(x: SymMatrix, p: float) -> SymMatrix:
    """X^p = V diag(lambda^p) V^T for positive definite X."""
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p!r}")
    w, v = jacobi_eigh(x)
    if w[0] <= 0:
        raise MatrixError("matrix power needs a positive definite matrix")
    return SymMatrix((v * w**p) @ v.T)


def congruence(a: TallMatrix, x: SymMatrix) -> SymMatrix:
    """A^T X A."""
    if a.rows != x.dim:
        raise MatrixError(f"A has {a.rows} rows but X is {x.dim} x {x.dim}")
    return SymMatrix(a.entries.T @ x.entries @ a.entries)


def ek_spectral_log(x: SymMatrix, k: int, p: float) -> LogValue:
    """e_k(lambda(X^p)) = e_k(lambda(X)^p), as a LogValue."""
    x.require_pd()
    if isinstance(k, bool) or int(k) != k or not 1 <= k <= x.dim:
        raise DomainError(f"k must be an integer with 1 <= k <= {x.dim}, got {k!r}")
    return LogValue.from_log(funcs.elem_sym_log_power(x.eigenvalues, k, p))


def ek_spectral(x: SymMatrix, k: int, p: float) -> float:
    return ek_spectral_log(x, k, p).value()


# =============================================================================
# Checkers
# =============================================================================


def _check_same_dim(x: SymMatrix, y: SymMatrix) -> None:
    if x.dim != y.dim:
        raise MatrixError(f"dimension mismatch: {x.dim} vs {y.dim}")


def check_ek_logconvex(
    x: SymMatrix,
    y: SymMatrix,
    k: int,
    p: float,
    tol: float = MATRIX_TOLERANCE,
    checker_id: str = "ek-logconvex",
) -> InequalityReport:
    """Midpoint log-convexity of X -> e_k(lambda(X^p)); margin = rhs - lhs."""
    _check_same_dim(x, y)
    lhs = ek_spectral_log(x.midpoint(y), k, p).log
    rhs = 0.5 * (ek_spectral_log(x, k, p).log + ek_spectral_log(y, k, p).log)
    inputs = {"X": x.tolist(), "Y": y.tolist(), "k": int(k), "p": p}
    return make_report(checker_id, inputs, lhs, rhs, rhs - lhs, tol)


def check_muir_logconvex(
    a: TallMatrix,
    x: SymMatrix,
    y: SymMatrix,
    k: int,
    p: float,
    tol: float = MATRIX_TOLERANCE,
    checker_id: str = "muir",
) -> InequalityReport:
    """
    log e_k(lambda((A^T Z A)^p)) is midpoint convex in Z for p in [-1, 0).

    Sides are compared as logs; margin = rhs - lhs.
    """
    if not -1.0 <= p < 0.0:
        raise DomainError(f"congruence log-convexity needs p in [-1, 0), got {p!r}")
    _check_same_dim(x, y)
    if not 1 <= k <= a.cols:
        raise DomainError(f"k must satisfy 1 <= k <= {a.cols}, got {k}")
    lhs = ek_spectral_log(congruence(a, x.midpoint(y)), k, p).log
    lx = ek_spectral_log(congruence(a, x), k, p).log
    ly = ek_spectral_log(congruence(a, y), k, p).log
    rhs = 0.5 * (lx + ly)
    inputs = {"A": a.entries.tolist(), "X": x.tolist(), "Y": y.tolist(), "k": int(k), "p": p}
    return make_report(checker_id, inputs, lhs, rhs, rhs - lhs, tol)


def check_ekmtx_recip_concave(
    x: SymMatrix,
    y: SymMatrix,
    k: int,
    p: float,
    tol: float = MATRIX_TOLERANCE,
    checker_id: str = "ekmtx",
) -> InequalityReport:
    """1 / e_k(lambda(X^p)) midpoint concavity for p in (-1, 0), proven when k|p| <= 1; margin = lhs - rhs."""
    if not -1.0 < p < 0.0:
        raise DomainError(f"reciprocal concavity needs p in (-1, 0), got {p!r}")
    _check_same_dim(x, y)

    def f(z: SymMatrix) -> float:
        return LogValue.from_log(-ek_spectral_log(z, k, p).log).value()

    lhs = f(x.midpoint(y))
    rhs = (f(x) + f(y)) / 2
    inputs = {"X": x.tolist(), "Y": y.tolist(), "k": int(k), "p": p}
    return make_report(checker_id, inputs, lhs, rhs, lhs - rhs, tol)


# =============================================================================
# Generators
# =============================================================================


RngLike = Union[int, np.random.Generator]


def _as_rng(seed: RngLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_spd(
    dim: int,
    seed: RngLike,
    spectrum_range: tuple[float, float] = DEFAULT_SPECTRUM_RANGE,
) -> SymMatrix:
    """
    Q diag(lambda) Q^T with log-uniform lambda in spectrum_range and Q a
    product of dim^2 random Givens rotations.
    """
    lo, hi = spectrum_range
    if not 0 < lo <= hi:
        raise DomainError(f"spectrum range must satisfy 0 < lo <= hi, got {spectrum_range}")
    if not 1 <= dim <= MAX_DIM:
        raise DomainError(f"dim must lie within [1, {MAX_DIM}], got {dim}")
    rng = _as_rng(seed)
    lam = np.exp(rng.uniform(math.log(lo), math.log(hi), dim))
    q = np.eye(dim)
    for _ in range(dim * dim if dim > 1 else 0):
        i, j = rng.choice(dim, size=2, replace=False)
        angle = rng.uniform(0.0, 2.0 * math.pi)
        c, s = math.cos(angle), math.sin(angle)
        qi, qj = q[:, i].copy(), q[:, j].copy()
        q[:, i] = c * qi - s * qj
        q[:, j] = s * qi + c * qj
    m = (q * lam) @ q.T
    return SymMatrix(0.5 * (m + m.T))


def random_tall(rows: int, cols: int, seed: RngLike, attempts: int = 10) -> TallMatrix:
    """Gaussian rows x cols matrix, redrawn until it has full column rank."""
    rng = _as_rng(seed)
    for _ in range(attempts):
        try:
            return TallMatrix(rng.standard_normal((rows, cols)))
        except MatrixError as e:
            last = e
    raise last


# =============================================================================
# Matrix suite
# =============================================================================


def _sample_muir(rng: np.random.Generator, params: TrialParams, dist: EntryDistribution) -> dict:
    a = random_tall(params.n, params.k, rng)
    x = random_spd(params.n, rng)
    y = random_spd(params.n, rng)
    return {"A": a.entries.tolist(), "X": x.tolist(), "Y": y.tolist(), "k": params.k, "p": params.p}


def _sample_pair(rng: np.random.Generator, params: TrialParams, dist: EntryDistribution) -> dict:
    x = random_spd(params.n, rng)
    y = random_spd(params.n, rng)
    return {"X": x.tolist(), "Y": y.tolist(), "k": params.k, "p": params.p}


def _muir_evaluator(checker_id: str):
    def evaluate(inputs: dict, tol: float) -> InequalityReport:
        a = TallMatrix(inputs["A"])
        x, y = SymMatrix(inputs["X"]), SymMatrix(inputs["Y"])
        return check_muir_logconvex(a, x, y, inputs["k"], inputs["p"], tol, checker_id)

    return evaluate


def _eval_ekmtx(inputs: dict, tol: float) -> InequalityReport:
    x, y = SymMatrix(inputs["X"]), SymMatrix(inputs["Y"])
    return check_ekmtx_recip_concave(x, y, inputs["k"], inputs["p"], tol)


def _ks(n: int) -> range:
    return range(1, n + 1)


register_checker(Checker(
    "muir", "e_k(lambda((A^T Z A)^-1)) is log-convex in Z", Family.MATRIX, (-1.0,),
    lambda p: p == -1.0, _ks, _sample_muir, _muir_evaluator("muir"),
))
register_checker(Checker(
    "mariet", "e_k(lambda((A^T Z A)^p)) is log-convex in Z for p in [-1, 0)", Family.MATRIX, (-1.0, -0.5, -0.1),
    lambda p: -1.0 <= p < 0.0, _ks, _sample_muir, _muir_evaluator("mariet"),
))
register_checker(Checker(
    "ekmtx", "1/e_k(lambda(Z^p)) is concave for p in (-1, 0), k|p| <= 1", Family.MATRIX, (-0.9, -0.5, -0.1),
    lambda p: -1.0 < p < 0.0, _ks, _sample_pair, _eval_ekmtx,
    proven_k=funcs.recip_proven,
))

MATRIX_CHECKS = ("muir", "mariet", "ekmtx")


def run_matrix_suite(
    check: str,
    dims: Sequence[int],
    trials: int,
    seed: int,
    k: Optional[int] = None,
    p_grid: Optional[Sequence[float]] = None,
    tol: float = MATRIX_TOLERANCE,
    threads: int = 1,
) -> SuiteSummary:
    """
    Run one matrix checker over every dimension in dims.

    Without a fixed k every valid k is cycled through; results are keyed
    '<check>@dim=<d>'.
    """
    if check not in MATRIX_CHECKS:
        raise ConfigError(f"unknown matrix check {check!r} (known: {', '.join(MATRIX_CHECKS)})")
    if not dims:
        raise ConfigError("at least one dimension is required")
    policy = IndexPolicy.fixed(k) if k is not None else IndexPolicy(PolicyMode.ALL_VALID)
    summary = SuiteSummary()
    for dim in dims:
        config = TrialConfig(
            seed=seed,
            trials=trials,
            n_range=(dim, dim),
            k_policy=policy,
            p_grid=None if p_grid is None else tuple(p_grid),
            tolerance=tol,
        )
        summary.merge(run_suite(config, [check], threads=threads, key_suffix=f"@dim={dim}"))
    return summary
