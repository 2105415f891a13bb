"""Exact Neyman-Pearson beta and meta-converse evaluations for BSC and BEC.

The BSC converse needs the optimal binary hypothesis test between the
channel law W(.|x) and the equiprobable output distribution 2^-n. Its
likelihood ratio is monotone in Hamming distance, so the optimal randomized
test fills whole distance shells in order and randomizes on the boundary
shell; beta is assembled in the log domain because shell masses under the
equiprobable law reach 2^-n.

The lambda vector in these converses is existentially quantified, so every
function here evaluates at a caller-chosen lambda; none of them claims a
single lambda is binding.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from .achievability import BISECT_TOL_BITS
from .channel import ChannelKind, ChannelSpec, binomial_log_pmf
from .numerics import LN2, LogValue, log_binomial_row


@dataclass(frozen=True)
class NPBetaResult:
    """Optimal test summary: accept shells below L, randomize with rho at L.

    The test accepting every output within Hamming distance L-1 of the
    reference word, plus distance-L outputs with probability rho, attains the
    requested detection probability exactly and false alarm exp(log_beta).
    """

    log_beta: LogValue
    threshold_weight_L: int
    randomization_rho: float

    @property
    def log2_beta(self) -> float:
        return self.log_beta.log2()


@functools.lru_cache(maxsize=4096)
def _bsc_shells(n: int, p: float) -> Tuple[np.ndarray, np.ndarray]:
    """(detection mass per distance shell, natural-log shell mass under 2^-n)."""
    if n <= 64:
        # exact-ish small-n path: comb products instead of exp(lgamma)
        pmass = np.array(
            [math.comb(n, j) * p**j * (1.0 - p) ** (n - j) for j in range(n + 1)]
        )
        log_q = np.array([math.log(math.comb(n, j)) - n * LN2 for j in range(n + 1)])
    else:
        pmass = np.exp(binomial_log_pmf(n, p))
        log_q = log_binomial_row(n) - n * LN2
    return pmass, log_q


def np_beta_bsc(n: int, p: float, alpha: float) -> NPBetaResult:
    """Minimal false alarm vs the equiprobable law at detection alpha.

    Requires 0 < p < 0.5 (reduce by symmetry at the caller); the likelihood
    ordering then runs from distance 0 outward.
    """
    if not 0.0 < p < 0.5:
        raise ValueError(f"np_beta_bsc requires 0 < p < 0.5, got {p}")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must be in [0,1], got {alpha}")
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    if alpha == 0.0:
        return NPBetaResult(LogValue.zero(), 0, 0.0)
    pmass, log_q = _bsc_shells(n, p)
    cum = np.cumsum(pmass)
    if alpha >= cum[-1]:
        return NPBetaResult(LogValue(0.0), n, 1.0)
    L = int(np.searchsorted(cum, alpha, side="left"))
    cum_before = math.fsum(pmass[:L])
    if pmass[L] > 0.0:
        rho = float((alpha - cum_before) / pmass[L])
    else:
        rho = 0.0
    rho = min(1.0, max(0.0, rho))
    parts = list(log_q[:L])
    if rho > 0.0:
        parts.append(math.log(rho) + log_q[L])
    if not parts:
        return NPBetaResult(LogValue.zero(), L, rho)
    return NPBetaResult(LogValue(float(logsumexp(parts))), L, rho)


def converse_max_log2M_bsc(spec: ChannelSpec, eps: float, lambda_i: float) -> float:
    """Meta-converse rate limit for a BSC class: log2(lambda) - log2(beta)."""
    if spec.kind is not ChannelKind.BSC:
        raise ValueError("converse_max_log2M_bsc requires a BSC spec")
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    if lambda_i <= 0.0:
        raise ValueError(f"lambda_i must be > 0, got {lambda_i}")
    beta = np_beta_bsc(spec.n, spec.p, 1.0 - eps)
    return math.log2(lambda_i) - beta.log2_beta


def _bec_conv_sum(length: int, p: float, log2_count: float) -> float:
    """sum_l C(len,l) p^l (1-p)^(len-l) (1 - 2^(len-l)/count)^+ in [0,1]."""
    lw = binomial_log_pmf(length, p)
    l = np.arange(length + 1)
    exponent = (length - l).astype(float) - log2_count
    keep = (exponent < 0.0) & (lw > -np.inf)
    if not np.any(keep):
        return 0.0
    log_terms = lw[keep] + np.log1p(-np.exp2(exponent[keep]))
    return min(1.0, float(math.exp(logsumexp(log_terms))))


def converse_eps_bec(spec: ChannelSpec, log2M: float, lambda_i: float) -> float:
    """Meta-converse error floor for a BEC class at size M and split lambda."""
    if spec.kind is not ChannelKind.BEC:
        raise ValueError("converse_eps_bec requires a BEC spec")
    if log2M < 0:
        raise ValueError(f"log2M must be >= 0, got {log2M}")
    if lambda_i <= 0.0:
        raise ValueError(f"lambda_i must be > 0, got {lambda_i}")
    return _bec_conv_sum(spec.n, spec.p, log2M - math.log2(lambda_i))


def _bisect_max_log2M_conv(bound_fn, eps_target: float) -> Optional[float]:
    """Largest log2M >= 0 with the converse floor still at or below target."""
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


def converse_max_log2M_bec(spec: ChannelSpec, eps: float, lambda_i: float) -> Optional[float]:
    """Largest log2M whose BEC converse floor does not exceed eps."""
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    return _bisect_max_log2M_conv(
        lambda lm: converse_eps_bec(spec, lm, lambda_i), eps
    )


def header_conv_eps_bec(spec: ChannelSpec, n0: int, m: int, log2M: float) -> float:
    """Error floor for BEC header codes: header-part plus payload-part sums."""
    if spec.kind is not ChannelKind.BEC:
        raise ValueError("header_conv_eps_bec requires a BEC spec")
    if not 0 <= n0 <= spec.n:
        raise ValueError(f"n0 must be in [0, n], got {n0}")
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    total = _bec_conv_sum(n0, spec.p, math.log2(m))
    total += _bec_conv_sum(spec.n - n0, spec.p, log2M)
    return min(1.0, total)


def header_conv_max_log2M_bsc(
    spec: ChannelSpec,
    eps_i: float,
    m: int,
    n0: int,
    all_eps: Sequence[float],
    eps0_points: int = 1000,
) -> Optional[float]:
    """Largest class size a BSC header code can have at this split.

    The header error allocation eps0 is optimized over a uniform grid on
    [0, min_j eps_j]: the m-codeword header constraint relaxes as eps0 grows
    while the payload limit tightens, so the best grid point is the smallest
    feasible one (found by bisection over the grid).
    """
    if spec.kind is not ChannelKind.BSC:
        raise ValueError("header_conv_max_log2M_bsc requires a BSC spec")
    if not 0 <= n0 <= spec.n:
        raise ValueError(f"n0 must be in [0, n], got {n0}")
    min_eps = min(all_eps)
    grid = np.linspace(0.0, min_eps, eps0_points)
    log2_m = math.log2(m)

    def header_ok(eps0: float) -> bool:
        if n0 == 0:
            # zero-length header: beta_alpha over a point space equals alpha
            return log2_m <= -math.log2(1.0 - eps0) if eps0 < 1.0 else True
        beta = np_beta_bsc(n0, spec.p, 1.0 - eps0)
        return log2_m <= -beta.log2_beta

    lo, hi = 0, len(grid) - 1
    if not header_ok(grid[hi]):
        return None
    if header_ok(grid[lo]):
        best_idx = lo
    else:
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if header_ok(grid[mid]):
                hi = mid
            else:
                lo = mid
        best_idx = hi
    eps0 = float(grid[best_idx])
    payload_alpha = 1.0 - (eps_i - eps0)
    if payload_alpha >= 1.0:
        return 0.0
    beta = np_beta_bsc(spec.n - n0, spec.p, payload_alpha)
    return -beta.log2_beta


def header_conv_max_log2M_bsc_best(
    spec: ChannelSpec,
    eps_i: float,
    m: int,
    all_eps: Sequence[float],
    eps0_points: int = 1000,
) -> Optional[float]:
    """Best BSC header-converse rate over every split 0 <= n0 <= n."""
    best = None
    for n0 in range(spec.n + 1):
        rate = header_conv_max_log2M_bsc(spec, eps_i, m, n0, all_eps, eps0_points)
        if rate is not None and (best is None or rate > best):
            best = rate
    return best


def header_conv_max_log2M_bec(
    spec: ChannelSpec, eps_i: float, m: int, n0: int, all_eps: Sequence[float]
) -> Optional[float]:
    """Largest class size whose BEC header-converse floor meets eps_i."""
    min_eps = min(all_eps)
    if header_conv_eps_bec(spec, n0, m, 0.0) > min_eps:
        return None
    return _bisect_max_log2M_conv(
        lambda lm: header_conv_eps_bec(spec, n0, m, lm), eps_i
    )


def header_conv_max_log2M_bec_best(
    spec: ChannelSpec, eps_i: float, m: int, all_eps: Sequence[float]
) -> Optional[float]:
    """Best BEC header-converse rate over every split 0 <= n0 <= n."""
    best = None
    for n0 in range(spec.n + 1):
        rate = header_conv_max_log2M_bec(spec, eps_i, m, n0, all_eps)
        if rate is not None and (best is None or rate > best):
            best = rate
    return best
