"""
Monte Carlo estimation of h_k through its exponential representation.

h_k(x) = E[(xi . x)^k] / k! for i.i.d. standard exponential xi. Samples are
drawn in fixed-size blocks, each from its own derived seed, so the estimate
does not depend on how many threads evaluate the blocks.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import partial

import numpy as np

from symineq.config import MC_BLOCK_SIZE
from symineq.sympoly import DomainError, PositiveVector, VectorLike
from symineq.verify import derive_seed

logger = logging.getLogger(__name__)


class EstimateOverflowError(DomainError):
    """(xi . x)^k overflowed double precision."""


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    k: int

    def z_score(self, exact: float) -> float:
        """(mean - exact) / std_error; 0 when both the error and the deviation vanish."""
        deviation = self.mean - exact
        if self.std_error == 0:
            return 0.0 if deviation == 0 else math.copysign(math.inf, deviation)
        return deviation / self.std_error


@dataclass(frozen=True)
class Moments:
    """Running count, mean and sum of squared deviations."""

    count: int
    mean: float
    m2: float

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        mean = float(np.mean(values))
        return cls(int(values.size), mean, float(np.sum((values - mean) ** 2)))


def merge_moments(a: Moments, b: Moments) -> Moments:
    """Combine two partial moment sets (pairwise update of Chan et al.)."""
    if a.count == 0:
        return b
    if b.count == 0:
        return a
    n = a.count + b.count
    delta = b.mean - a.mean
    mean = a.mean + delta * b.count / n
    m2 = a.m2 + b.m2 + delta * delta * a.count * b.count / n
    return Moments(n, mean, m2)


def exponential_from_uniform(u):
    """Inverse-CDF transform -log(1 - u) of uniforms in [0, 1)."""
    return -np.log1p(-np.asarray(u, dtype=float))


def sample_exponential(rng: np.random.Generator, size) -> np.ndarray:
    return exponential_from_uniform(rng.random(size))


def _block_sizes(samples: int) -> list[int]:
    full, rest = divmod(samples, MC_BLOCK_SIZE)
    return [MC_BLOCK_SIZE] * full + ([rest] if rest else [])


def _block_moments(x: np.ndarray, k: int, seed: int, job: tuple[int, int]) -> Moments:
    index, size = job
    rng = np.random.default_rng(derive_seed(seed, "mc-block", index))
    s = np.sum(sample_exponential(rng, (size, x.size)) * x, axis=1)
    with np.errstate(over="ignore", invalid="ignore"):
        # repeated products scale exactly under x -> 2x
        powers = s.copy()
        for _ in range(k - 1):
            powers *= s
        values = powers / math.factorial(k)
    if not np.all(np.isfinite(values)):
        raise EstimateOverflowError(
            f"(xi . x)^{k} overflows; rescale x (h_k is homogeneous of degree k) and scale the estimate back"
        )
    return Moments.of(values)


def estimate_hk(x: VectorLike, k: int, samples: int, seed: int, threads: int = 1) -> McEstimate:
    """
    Estimate h_k(x) by the sample mean of (xi . x)^k / k!.

    Raises:
        DomainError: k < 0 or samples < 2
        EstimateOverflowError: a sample overflowed
    """
    x = PositiveVector.of(x)
    if isinstance(k, bool) or int(k) != k or k < 0:
        raise DomainError(f"k must be a nonnegative integer, got {k!r}")
    if int(samples) != samples or samples < 2:
        raise DomainError(f"samples must be an integer >= 2, got {samples!r}")
    if k == 0:
        return McEstimate(1.0, 0.0, int(samples), 0)

    jobs = list(enumerate(_block_sizes(int(samples))))
    run = partial(_block_moments, x.as_array(), int(k), seed)
    logger.info(f"Estimating h_{k} over {samples} samples in {len(jobs)} block(s)")
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            blocks = list(pool.map(run, jobs))
    else:
        blocks = [run(job) for job in jobs]

    total = Moments(0, 0.0, 0.0)
    for block in blocks:
        total = merge_moments(total, block)
    variance = total.m2 / (total.count - 1)
    return McEstimate(total.mean, math.sqrt(variance / total.count), total.count, int(k))
