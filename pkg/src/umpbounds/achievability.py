"""Dependence-testing achievability bounds for UMP codes and header codes.

Every bound here is a binomial tail sum of the form

    sum_t  C(len,t) p^t (1-p)^(len-t) * min[1, 2^(coeff + density shift at t)]

evaluated fully in the log domain: the min is taken per summand before
accumulation, never by clamping an overflowed sum. Class sizes are carried
as real-valued log2(M); a concrete integer code takes floor(2^log2M).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.special import logsumexp

from .channel import ChannelKind, ChannelSpec, binomial_log_pmf
from .numerics import LN2

BISECT_TOL_BITS = 1e-6


@dataclass(frozen=True)
class SimplexWeights:
    """Resource-split weights over the m classes: nonnegative, summing to 1."""

    weights: tuple

    def __init__(self, weights):
        w = tuple(float(v) for v in weights)
        if any(v < 0 for v in w):
            raise ValueError(f"simplex weights must be nonnegative: {w}")
        if abs(sum(w) - 1.0) > 1e-12:
            raise ValueError(f"simplex weights must sum to 1, got {sum(w)!r}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def uniform(cls, m: int) -> "SimplexWeights":
        return cls([1.0 / m] * m)

    def __len__(self):
        return len(self.weights)

    def __getitem__(self, i):
        return self.weights[i]


@dataclass(frozen=True)
class ClassProfile:
    """One message class: size as log2(M), error target, prior weight."""

    log2M: float = 0.0
    eps_target: Optional[float] = None
    mu: float = 0.0

    def __post_init__(self):
        if self.log2M < 0:
            raise ValueError(f"log2M must be >= 0, got {self.log2M}")
        if self.eps_target is not None and not 0.0 < self.eps_target < 1.0:
            raise ValueError(f"eps_target must be in (0,1), got {self.eps_target}")
        if self.mu < 0:
            raise ValueError(f"mu must be >= 0, got {self.mu}")


@dataclass(frozen=True)
class HeaderSplit:
    """First n0 channel uses carry the class index, the rest carry the message."""

    n0: int

    def __post_init__(self):
        if self.n0 < 0:
            raise ValueError(f"n0 must be >= 0, got {self.n0}")


@functools.lru_cache(maxsize=4096)
def _cached_log_pmf(n: int, p: float) -> np.ndarray:
    return binomial_log_pmf(n, p)


def _dt_tail_sum(kind: ChannelKind, length: int, p: float, log2_coeff: float) -> float:
    """sum_t C(len,t) p^t (1-p)^(len-t) min[1, 2^(coeff - density(t))] in [0,1].

    For BSC the density shift is -len - t*log2(p) + (t-len)*log2(1-p) and t
    counts flips; for BEC it is t - len and t counts erasures.
    """
    if log2_coeff == -math.inf:
        return 0.0
    if length == 0:
        return min(1.0, 2.0**min(0.0, log2_coeff))
    if p == 0.0 or (p == 1.0 and kind is ChannelKind.BSC):
        # all mass on one weight where the ratio term is 2^(coeff - len)
        return min(1.0, 2.0**min(0.0, log2_coeff - length))
    if p == 1.0:
        # BEC, everything erased: ratio term is 2^coeff >= 1 whenever M >= lambda
        return min(1.0, 2.0**min(0.0, log2_coeff))
    lw = _cached_log_pmf(length, p)
    t = np.arange(length + 1)
    if kind is ChannelKind.BSC:
        exponent_bits = log2_coeff - length - t * math.log2(p) + (t - length) * math.log2(1.0 - p)
    else:
        exponent_bits = log2_coeff + (t - length).astype(float)
    log_terms = lw + np.minimum(0.0, exponent_bits * LN2)
    return min(1.0, float(math.exp(logsumexp(log_terms))))


def dt_class_bound(spec: ChannelSpec, log2M: float, lambda_i: float) -> float:
    """Upper bound on the class error of a UMP code with M/lambda threshold.

    The bound depends on M and lambda only through M/lambda, so it is exactly
    invariant under (log2M, lambda) -> (log2M - log2 lambda, 1).
    """
    if not 0.0 < lambda_i <= 1.0:
        raise ValueError(f"lambda_i must be in (0,1], got {lambda_i}")
    if log2M < 0:
        raise ValueError(f"log2M must be >= 0, got {log2M}")
    log2_ratio = log2M - math.log2(lambda_i)
    return _dt_tail_sum(spec.kind, spec.n, spec.p, log2_ratio)


def _log2_count_minus_one(log2_count: float) -> float:
    """log2(2^x - 1), the multiplier for homogeneous DT bounds; -inf at x=0."""
    if log2_count < 0:
        raise ValueError(f"count must be >= 1, got log2 count {log2_count}")
    if log2_count == 0.0:
        return -math.inf
    if log2_count > 52:
        return log2_count
    return log2_count + math.log1p(-(2.0 ** (-log2_count))) / LN2


def header_ach_bound(spec: ChannelSpec, split: HeaderSplit, m: int, log2M: float) -> float:
    """Class error bound for the header construction.

    Two homogeneous dependence-testing bounds back to back: m codewords over
    the n0-symbol header, then 2^log2M codewords over the remaining n - n0
    symbols. With m = 1 and n0 = 0 this is exactly the classical homogeneous
    bound.
    """
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if split.n0 > spec.n:
        raise ValueError(f"n0={split.n0} exceeds blocklength n={spec.n}")
    if split.n0 == 0 and m != 1:
        raise ValueError("a zero-length header cannot distinguish m > 1 classes")
    if log2M < 0:
        raise ValueError(f"log2M must be >= 0, got {log2M}")
    header_coeff = (math.log2(m - 1) - 1.0) if m > 1 else -math.inf
    payload_coeff = _log2_count_minus_one(log2M) - 1.0
    total = _dt_tail_sum(spec.kind, split.n0, spec.p, header_coeff)
    total += _dt_tail_sum(spec.kind, spec.n - split.n0, spec.p, payload_coeff)
    return min(1.0, total)


def expected_error_dt(
    spec: ChannelSpec, profiles: Sequence[ClassProfile], lambdas: SimplexWeights
) -> float:
    """Prior-weighted sum of the per-class DT bounds, clamped to [0,1]."""
    if len(profiles) != len(lambdas):
        raise ValueError(
            f"{len(profiles)} profiles but {len(lambdas)} simplex weights"
        )
    total_mu = sum(p.mu for p in profiles)
    if abs(total_mu - 1.0) > 1e-9:
        raise ValueError(f"class priors must sum to 1, got {total_mu}")
    total = 0.0
    for prof, lam in zip(profiles, lambdas.weights):
        if prof.mu == 0.0:
            continue
        total += prof.mu * dt_class_bound(spec, prof.log2M, lam)
    return min(1.0, total)


def _bisect_max_log2M(bound_fn, eps_target: float) -> Optional[float]:
    """Largest log2M >= 0 with bound_fn(log2M) <= eps_target, else None."""
    if bound_fn(0.0) > eps_target:
        return None
    lo, hi = 0.0, 8.0
    while bound_fn(hi) <= eps_target:
        lo = hi
        hi *= 2.0
    while hi - lo > BISECT_TOL_BITS:
        mid = 0.5 * (lo + hi)
        if bound_fn(mid) <= eps_target:
            lo = mid
        else:
            hi = mid
    return lo


def max_log2M_dt(spec: ChannelSpec, eps_target: float, lambda_i: float) -> Optional[float]:
    """Largest class size (in bits) whose DT bound meets eps_target.

    Returns None when even a single codeword exceeds the target; rate sweeps
    hit that routinely at small n, so infeasibility is a value, not an error.
    """
    if not 0.0 < eps_target < 1.0:
        raise ValueError(f"eps_target must be in (0,1), got {eps_target}")
    return _bisect_max_log2M(lambda lm: dt_class_bound(spec, lm, lambda_i), eps_target)


def max_log2M_header_ach(
    spec: ChannelSpec, eps_target: float, m: int, n0: int
) -> Optional[float]:
    """Largest payload size meeting eps_target for a fixed header split."""
    if not 0.0 < eps_target < 1.0:
        raise ValueError(f"eps_target must be in (0,1), got {eps_target}")
    split = HeaderSplit(n0)
    return _bisect_max_log2M(
        lambda lm: header_ach_bound(spec, split, m, lm), eps_target
    )


def max_log2M_header_ach_best(
    spec: ChannelSpec, eps_target: float, m: int, all_eps: Sequence[float]
) -> Optional[float]:
    """Best header-achievability rate over all admissible splits.

    A split is admissible when it supports at least one codeword in every
    class, i.e. the bound at M=1 meets every class's target. The header term
    does not depend on the class, so that reduces to a single comparison
    against the strictest target.
    """
    min_eps = min(all_eps)
    best = None
    n0_start = 0 if m == 1 else 1
    for n0 in range(n0_start, spec.n + 1):
        header_coeff = (math.log2(m - 1) - 1.0) if m > 1 else -math.inf
        header_term = _dt_tail_sum(spec.kind, n0, spec.p, header_coeff)
        if header_term > min_eps:
            continue
        payload_len = spec.n - n0
        budget = eps_target - header_term

        def payload_bound(lm, _len=payload_len):
            coeff = _log2_count_minus_one(lm) - 1.0
            return _dt_tail_sum(spec.kind, _len, spec.p, coeff)

        rate = _bisect_max_log2M(payload_bound, budget)
        if rate is not None and (best is None or rate > best):
            best = rate
    return best
