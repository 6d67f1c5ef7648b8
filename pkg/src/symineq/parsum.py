"""
Parallel sums and the Anderson representation.

Provides:
- Parallel sum x : y and the p-parallel sum x :_p y
- Multivariate p-parallel sum [x_1^p : ... : x_n^p]^(1/p)
- Analytic gradient/Hessian of the bivariate p-parallel sum and a
  finite-difference cross-check
- Direct and recursive evaluation of the normalized ratio psi_{k,n}
- The phi_{k,n} decomposition into parallel sums over deleted-coordinate vectors
"""

import logging
import math
from functools import lru_cache

import numpy as np

from symineq import funcs
from symineq.sympoly import DomainError, PositiveVector, VectorLike, elem_sym_log_all

logger = logging.getLogger(__name__)


def _check_p(p: float, lower: float = -1.0) -> None:
    if not math.isfinite(p) or p == 0:
        raise DomainError(f"p must be finite and nonzero, got {p!r}")
    if p < lower:
        raise DomainError(f"p must be >= {lower}, got {p}")


def _check_positive(**values: float) -> None:
    for name, v in values.items():
        if not (v > 0 and math.isfinite(v)):
            raise DomainError(f"{name} must be a finite positive real, got {v!r}")


def par_sum(x: float, y: float) -> float:
    """x : y = (1/x + 1/y)^-1 = xy/(x+y); x : 0 = 0 by continuity."""
    if x < 0 or y < 0:
        raise DomainError(f"parallel sum needs nonnegative arguments, got ({x}, {y})")
    if x == 0 or y == 0:
        return 0.0
    # ordered operands keep x : y == y : x bit-for-bit and x : x == x/2 exactly
    lo, hi = min(x, y), max(x, y)
    return lo * (hi / (lo + hi))


def p_par_sum(x: float, y: float, p: float) -> float:
    """
    p-parallel sum x :_p y = [x^p : y^p]^(1/p), valid for p >= -1, p != 0.

    Evaluated as a power mean of (x, y) with exponent -p, factoring out the
    dominant argument so neither power overflows.
    """
    _check_p(p)
    _check_positive(x=x, y=y)
    r = -p
    base, other = (max(x, y), min(x, y)) if r > 0 else (min(x, y), max(x, y))
    return base * (1.0 + (other / base) ** r) ** (1.0 / r)


def multi_p_par_sum(x: VectorLike, p: float) -> float:
    """[x_1^p : ... : x_n^p]^(1/p) = (sum x_i^-p)^(-1/p) for p > 0."""
    _check_p(p, lower=0.0)
    v = PositiveVector.of(x).strict().as_array()
    m = v.min()
    return float(m * np.sum((v / m) ** (-p)) ** (-1.0 / p))


def grad_p_par_sum(x: float, y: float, p: float) -> np.ndarray:
    """Analytic gradient of (x, y) -> x :_p y, i.e. ((f/x)^(p+1), (f/y)^(p+1))."""
    f = p_par_sum(x, y, p)
    return np.array([(f / x) ** (p + 1), (f / y) ** (p + 1)])


def hessian_p_par_sum(x: float, y: float, p: float) -> np.ndarray:
    """
    Closed-form Hessian of (x, y) -> x :_p y.

    (p+1) * s * [[-x^(p-1) y^(p+1), x^p y^p], [x^p y^p, -x^(p+1) y^(p-1)]]
    with s = (x^p + y^p)^(-2-1/p). The determinant vanishes identically.
    """
    _check_p(p)
    _check_positive(x=x, y=y)
    s = (x**p + y**p) ** (-2.0 - 1.0 / p)
    off = (p + 1) * x**p * y**p * s
    return np.array(
        [
            [-(p + 1) * x ** (p - 1) * y ** (p + 1) * s, off],
            [off, -(p + 1) * x ** (p + 1) * y ** (p - 1) * s],
        ]
    )


def finite_difference_hessian(x: float, y: float, p: float, rel_step: float = 1e-5) -> np.ndarray:
    """
    Central-difference Hessian of x :_p y with step h = rel_step * max(x, y).

    Differences the analytic gradient, so round-off stays at eps/h. The step
    along each coordinate is clamped to half that coordinate so both
    evaluation points stay positive.
    """
    h = rel_step * max(x, y)
    hx, hy = min(h, x / 2), min(h, y / 2)
    cols = []
    for dx, dy, step in ((hx, 0.0, hx), (0.0, hy, hy)):
        plus = grad_p_par_sum(x + dx, y + dy, p)
        minus = grad_p_par_sum(x - dx, y - dy, p)
        cols.append((plus - minus) / (2 * step))
    fd = np.column_stack(cols)
    return 0.5 * (fd + fd.T)


# =============================================================================
# Anderson representation
# =============================================================================


def anderson_psi(x: VectorLike, k: int) -> float:
    """psi_{k,n}(x) = C(n,k-1) e_k(x) / (C(n,k) e_{k-1}(x)), 1 <= k <= n."""
    x = PositiveVector.of(x).strict()
    n = x.n
    if int(k) != k or not 1 <= k <= n:
        raise DomainError(f"psi needs integer 1 <= k <= n = {n}, got {k!r}")
    le = elem_sym_log_all(x, k)
    log_scale = math.log(math.comb(n, k - 1)) - math.log(math.comb(n, k))
    return math.exp(log_scale + le[k] - le[k - 1])


def anderson_psi_recursive(x: VectorLike, k: int) -> float:
    """
    psi_{k,n}(x) = sum_j [x_j / (n-k+1)] : [psi_{k-1,n-1}(x_[j]) / (k-1)].

    Recurses down to psi_{1,m}, the arithmetic mean, for k >= 2. Each subset
    of coordinates is evaluated once.
    """
    x = PositiveVector.of(x).strict()
    n = x.n
    if int(k) != k or not 2 <= k <= n:
        raise DomainError(f"recursive psi needs integer 2 <= k <= n = {n}, got {k!r}; use anderson_psi")
    values = x.entries

    @lru_cache(maxsize=None)
    def psi(idx: tuple[int, ...], j: int) -> float:
        if j == 1:
            return anderson_psi([values[i] for i in idx], 1)
        m = len(idx)
        total = 0.0
        for pos, i in enumerate(idx):
            rest = idx[:pos] + idx[pos + 1 :]
            total += par_sum(values[i] / (m - j + 1), psi(rest, j - 1) / (j - 1))
        return total

    return psi(tuple(range(n)), int(k))


def anderson_weights(n: int, k: int) -> tuple[float, float]:
    """
    p-th powers (a_k^p, b_k^p) of the scaling factors in the phi decomposition.

    Both reduce to 1/k once the binomial normalizations of psi are absorbed.
    """
    if not 2 <= k <= n:
        raise DomainError(f"decomposition needs 2 <= k <= n = {n}, got {k}")
    a = math.comb(n, k) / (math.comb(n, k - 1) * (n - k + 1))
    b = math.comb(n, k) * math.comb(n - 1, k - 2) / (math.comb(n, k - 1) * math.comb(n - 1, k - 1) * (k - 1))
    return a, b


def phi_decomposition(x: VectorLike, k: int, p: float) -> float:
    """
    phi_{k,n}(x) rebuilt as (sum_j g_j(x)^p)^(1/p).

    g_j = (a_k x_j) :_p (b_k phi_{k-1,n-1}(x_[j])); agrees with funcs.phi.
    """
    _check_p(p, lower=0.0)
    x = PositiveVector.of(x).strict()
    a_p, b_p = anderson_weights(x.n, k)
    a, b = a_p ** (1.0 / p), b_p ** (1.0 / p)
    g = np.array([p_par_sum(a * x[j], b * funcs.phi(x.drop(j), k - 1, p), p) for j in range(x.n)])
    return float(np.sum(g**p) ** (1.0 / p))
