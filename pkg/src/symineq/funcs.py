"""
Ratio functionals of symmetric polynomials.

Provides:
- phi_{k,n}: [e_k(x^p) / e_{k-1}(x^p)]^(1/p)
- elem_root: [e_k(x^p)]^(1/(pk))
- big_phi Phi_{k,l,n}: [e_k(x^p) / e_{k-l}(x^p)]^(1/(lp))
- hom_root: [h_k(x^p)]^(1/(pk)) and hom_ratio: [h_k(x^p) / h_1(x^p)]^(1/(p(k-1)))
- recip_elem: 1 / e_k(x^p) for p in (-1, 0)

Ratios are taken on raw recurrence values when those stay in range and as
differences of log-domain values otherwise, so no p-grid or n overflows.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from symineq.sympoly import (
    DomainError,
    LogValue,
    PositiveVector,
    VectorLike,
    complete_hom_log_all,
    complete_hom_raw,
    elem_sym_all,
    elem_sym_log_all,
    elem_sym_raw,
)

logger = logging.getLogger(__name__)


class RatioKind(str, Enum):
    ELEM_RATIO = "elem_ratio"
    ELEM_ROOT = "elem_root"
    HOM_ROOT = "hom_root"
    HOM_RATIO = "hom_ratio"
    RECIP_ELEM = "recip_elem"


def _check_int(name: str, v: int, lo: int, hi: float = math.inf) -> None:
    if isinstance(v, bool) or int(v) != v or not lo <= v <= hi:
        bound = f"{lo} <= {name}" + (f" <= {hi}" if hi != math.inf else "")
        raise DomainError(f"{name} must be an integer with {bound}, got {v!r}")


def _check_positive_p(p: float) -> None:
    if not (math.isfinite(p) and p > 0):
        raise DomainError(f"p must be a finite positive real, got {p!r}")


def _exp(log_value: float) -> float:
    try:
        return math.exp(log_value)
    except OverflowError:
        raise DomainError(f"result exp({log_value:.6g}) overflows double precision") from None


def _power_logs(x: PositiveVector, k: int, p: float, kernel) -> np.ndarray:
    """
    log kernel_0(x^p) .. log kernel_k(x^p) without ever forming x^p.

    The largest power is factored out first: e_j(c*u) = c^j e_j(u), and the
    same holds for h_j.
    """
    if p <= 0:
        x = x.strict()
    with np.errstate(divide="ignore"):
        lp = p * np.log(x.as_array())
    finite = lp[np.isfinite(lp)]
    shift = float(finite.max()) if finite.size else 0.0
    logs = kernel(PositiveVector.of(np.exp(lp - shift)), k)
    return logs + shift * np.arange(k + 1)


def _elem_logs(x: PositiveVector, k: int, p: float) -> np.ndarray:
    return _power_logs(x, k, p, elem_sym_log_all)


# below this the raw recurrence would work in subnormals
_RAW_FLOOR = 1e-280


def _raw_powers(x: PositiveVector, p: float) -> list[float] | None:
    """x^p as plain floats, or None when a power overflows (or divides by zero)."""
    try:
        return [v**p for v in x.entries]
    except (OverflowError, ZeroDivisionError):
        return None


def _in_raw_range(v: float) -> bool:
    return _RAW_FLOOR < v < math.inf


def _root_ratio(x: PositiveVector, k: int, j: int, p: float, raw_kernel, log_kernel) -> float:
    """
    [K_k(x^p) / K_j(x^p)]^(1/(p(k-j))) for a kernel K in {e, h}.

    Evaluated on raw values when x^p, K_k and K_j stay in the normal double
    range, otherwise from log-domain values. x is already validated.
    """
    exponent = 1.0 / (p * (k - j))
    y = _raw_powers(x, p)
    if y is not None:
        vals = raw_kernel(y, k)
        num, den = vals[k], vals[j]
        if _in_raw_range(num) and _in_raw_range(den):
            ratio = num / den
            try:
                return ratio if exponent == 1.0 else ratio**exponent
            except OverflowError:
                pass

    logs = _power_logs(x, k, p, log_kernel)
    if logs[k] == -np.inf:
        return 0.0
    return _exp((logs[k] - logs[j]) * exponent)


def phi(x: VectorLike, k: int, p: float) -> float:
    """phi_{k,n}(x) = [e_k(x^p) / e_{k-1}(x^p)]^(1/p), x strictly positive."""
    x = PositiveVector.of(x).strict()
    _check_int("k", k, 1, x.n)
    _check_positive_p(p)
    return _root_ratio(x, k, k - 1, p, elem_sym_raw, elem_sym_log_all)


def ml_ratio(x: VectorLike, k: int) -> float:
    """Marcus-Lopes ratio e_k(x) / e_{k-1}(x) computed from raw values."""
    x = PositiveVector.of(x).strict()
    _check_int("k", k, 1, x.n)
    e = elem_sym_all(x, k)
    return float(e[k] / e[k - 1])


def elem_root(x: VectorLike, k: int, p: float) -> float:
    """[e_k(x^p)]^(1/(pk)); zero entries allowed."""
    x = PositiveVector.of(x)
    _check_int("k", k, 1, x.n)
    _check_positive_p(p)
    return _root_ratio(x, k, 0, p, elem_sym_raw, elem_sym_log_all)


def big_phi(x: VectorLike, k: int, l: int, p: float) -> float:
    """Phi_{k,l,n}(x) = [e_k(x^p) / e_{k-l}(x^p)]^(1/(lp)), 1 <= l <= k <= n."""
    x = PositiveVector.of(x).strict()
    _check_int("k", k, 1, x.n)
    _check_int("l", l, 1, k)
    _check_positive_p(p)
    return _root_ratio(x, k, k - l, p, elem_sym_raw, elem_sym_log_all)


def hom_root(x: VectorLike, k: int, p: float) -> float:
    """[h_k(x^p)]^(1/(pk)); zero entries allowed."""
    x = PositiveVector.of(x)
    _check_int("k", k, 1)
    _check_positive_p(p)
    return _root_ratio(x, k, 0, p, complete_hom_raw, complete_hom_log_all)


def hom_ratio(x: VectorLike, k: int, p: float) -> float:
    """[h_k(x^p) / h_1(x^p)]^(1/(p(k-1))), x strictly positive, k >= 2."""
    x = PositiveVector.of(x).strict()
    _check_int("k", k, 2)
    _check_positive_p(p)
    return _root_ratio(x, k, 1, p, complete_hom_raw, complete_hom_log_all)


def recip_elem(x: VectorLike, k: int, p: float) -> float:
    """1 / e_k(x^p) for p in the open interval (-1, 0)."""
    x = PositiveVector.of(x).strict()
    _check_int("k", k, 1, x.n)
    if not -1.0 < p < 0.0:
        raise DomainError(f"reciprocal form needs p in (-1, 0), got {p!r}")
    return _exp(-float(elem_sym_log_power(x, k, p)))


def elem_sym_log_power(x: VectorLike, k: int, p: float) -> float:
    """log e_k(x^p) for any real p (strictly positive x when p <= 0)."""
    x = PositiveVector.of(x)
    _check_int("k", k, 0, x.n)
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p!r}")
    return float(_elem_logs(x, k, p)[k])


def elem_sym_power(x: VectorLike, k: int, p: float) -> float:
    """e_k(x^p) for any real p; inf when it overflows double range."""
    x = PositiveVector.of(x)
    _check_int("k", k, 0, x.n)
    if not math.isfinite(p):
        raise DomainError(f"p must be finite, got {p!r}")
    if p <= 0:
        x = x.strict()
    y = _raw_powers(x, p)
    if y is not None:
        value = elem_sym_raw(y, k)[k]
        if _in_raw_range(value):
            return value
    return LogValue.from_log(float(_elem_logs(x, k, p)[k])).value()


# slack for k|p| landing a rounding error above 1
_RECIP_SLACK = 1e-12


def recip_proven(k: int, p: float) -> bool:
    """True when 1/e_k(x^p) is known concave: p in (-1, 0) and k|p| <= 1."""
    return -1.0 < p < 0.0 and k * abs(p) <= 1.0 + _RECIP_SLACK


def headline_exponent(q: float) -> float:
    """
    Map the headline exponent q in (0, 1] of the h_k inequalities to p = 1/q.

    [h_k(x^(1/q))]^(q/k) is hom_root(x, k, 1/q).
    """
    if not 0.0 < q <= 1.0:
        raise DomainError(f"headline exponent must lie in (0, 1], got {q!r}")
    return 1.0 / q


@dataclass(frozen=True)
class RatioSpec:
    """One ratio functional together with the exponent range where its inequality is proven."""

    kind: RatioKind
    k: int
    p: float
    l: int = 1

    def in_range(self, p: float | None = None) -> bool:
        """True when (k, p) lies inside the proven range for this kind."""
        p = self.p if p is None else p
        if self.kind in (RatioKind.ELEM_RATIO, RatioKind.ELEM_ROOT):
            return 0.0 < p <= 1.0
        if self.kind == RatioKind.HOM_ROOT:
            return p >= 1.0 and self.k >= 1
        if self.kind == RatioKind.HOM_RATIO:
            return p >= 1.0 and self.k >= 2
        return recip_proven(self.k, p)

    def validate(self, n: int) -> None:
        """Raise DomainError unless 1 <= l <= k <= n and p is in range."""
        _check_int("l", self.l, 1, self.k)
        if self.kind not in (RatioKind.HOM_ROOT, RatioKind.HOM_RATIO):
            _check_int("k", self.k, 1, n)
        if not self.in_range():
            raise DomainError(f"p = {self.p} is outside the proven range of {self.kind.value}")

    def evaluate(self, x: VectorLike) -> float:
        x = PositiveVector.of(x)
        self.validate(x.n)
        if self.kind == RatioKind.ELEM_RATIO:
            return big_phi(x, self.k, self.l, self.p)
        if self.kind == RatioKind.ELEM_ROOT:
            return elem_root(x, self.k, self.p)
        if self.kind == RatioKind.HOM_ROOT:
            return hom_root(x, self.k, self.p)
        if self.kind == RatioKind.HOM_RATIO:
            return hom_ratio(x, self.k, self.p)
        return recip_elem(x, self.k, self.p)
