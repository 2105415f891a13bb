"""Normal approximation, expected rate, proportional betting, moderate deviations.

BSC and BEC have a unique capacity-achieving input, so the min/max conditional
variances coincide and a single dispersion V serves for every error target.
Every quantity is kept in bits (V in bits^2, gaps in bits, logs base 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

from .achievability import ClassProfile, SimplexWeights
from .channel import ChannelSpec, channel_stats
from .numerics import gaussian_Q_inv


def normal_approx_log2M(spec: ChannelSpec, eps: float, lambda_i: float) -> float:
    """n*C - sqrt(n*V)*Qinv(eps) - log2(1/lambda); may be negative at small n.

    With lambda = 1 this is the classical single-class second-order rate.
    Callers clamp for display.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0,1), got {eps}")
    if lambda_i <= 0.0:
        raise ValueError(f"lambda_i must be > 0, got {lambda_i}")
    stats = channel_stats(spec)
    if stats.dispersion <= 0.0:
        raise ValueError(
            f"normal approximation needs positive dispersion, got V={stats.dispersion}"
        )
    return (
        spec.n * stats.capacity
        - math.sqrt(spec.n * stats.dispersion) * gaussian_Q_inv(eps)
        - math.log2(1.0 / lambda_i)
    )


def expected_rate(profiles: Sequence[ClassProfile], n: int) -> float:
    """(1/n) sum_i mu_i (log2 M_i - log2 mu_i), with 0*log(1/0) = 0."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    total_mu = sum(p.mu for p in profiles)
    if abs(total_mu - 1.0) > 1e-9:
        raise ValueError(f"class priors must sum to 1, got {total_mu}")
    total = 0.0
    for prof in profiles:
        if prof.mu == 0.0:
            continue
        total += prof.mu * (prof.log2M - math.log2(prof.mu))
    return total / n


def optimal_lambda(mu: Sequence[float]) -> SimplexWeights:
    """Expected-rate-maximizing split: proportional betting, lambda = mu."""
    return SimplexWeights(mu)


def kl_divergence_bits(mu: Sequence[float], lam: Sequence[float]) -> float:
    """D(mu || lambda) in bits; infinite when lambda vanishes where mu does not."""
    if len(mu) != len(lam):
        raise ValueError(f"length mismatch: {len(mu)} vs {len(lam)}")
    total = 0.0
    for m_i, l_i in zip(mu, lam):
        if m_i == 0.0:
            continue
        if l_i == 0.0:
            return math.inf
        total += m_i * math.log2(m_i / l_i)
    return total


def expected_rate_loss(mu: Sequence[float], lam: Sequence[float], n: int) -> float:
    """Expected-rate penalty D(mu||lambda)/n of betting lambda instead of mu."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return kl_divergence_bits(mu, lam) / n


@dataclass(frozen=True)
class ModDevSchedule:
    """Moderate-deviations schedule for one class.

    rho(n) is the gap to capacity in bits per channel use;
    lambda_log_penalty(n) is (1/n)*log2(1/Lambda_n) in bits per channel use.
    """

    rho: Callable[[int], float]
    lambda_log_penalty: Callable[[int], float]

    def check_regularity(self, ns: Sequence[int]) -> bool:
        """Check the finite-prefix proxies of the limit conditions on ns.

        rho decreasing toward 0, n*rho^2 increasing, and rho - penalty > 0 at
        every supplied n. A True result is evidence on the prefix only.
        """
        ns = sorted(ns)
        rhos = [self.rho(n) for n in ns]
        if any(r <= 0 for r in rhos):
            return False
        for a, b in zip(rhos, rhos[1:]):
            if b > a:
                return False
        speeds = [n * r * r for n, r in zip(ns, rhos)]
        for a, b in zip(speeds, speeds[1:]):
            if b < a:
                return False
        return all(self.rho(n) - self.lambda_log_penalty(n) > 0 for n in ns)


@dataclass(frozen=True)
class ModDevPoint:
    """Finite-n moderate-deviations diagnostics for one class.

    When the positivity condition rho_n > penalty_n fails the error is
    bounded away from zero and no decay prediction is made.
    """

    exponent: float  # 1/(2V)
    speed: float  # n*(rho_n - penalty_n)^2
    predicted_log2_error: Optional[float]
    error_bounded_away: bool


def md_exponent_and_speed(spec: ChannelSpec, sched: ModDevSchedule, n: int) -> ModDevPoint:
    """Exponent 1/(2V) and speed n*(rho_n - penalty_n)^2 at finite n."""
    stats = channel_stats(spec)
    if stats.dispersion <= 0.0:
        raise ValueError(
            f"moderate deviations need positive dispersion, got V={stats.dispersion}"
        )
    exponent = 1.0 / (2.0 * stats.dispersion)
    gap = sched.rho(n) - sched.lambda_log_penalty(n)
    if gap <= 0.0:
        return ModDevPoint(exponent, n * gap * gap, None, True)
    speed = n * gap * gap
    return ModDevPoint(exponent, speed, -speed * exponent, False)
