"""Binary symmetric / binary erasure channel descriptions and sampling.

Only the uniform input distribution is implemented; it is capacity-achieving
for both channels, and every bound in this package is evaluated under it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np
from scipy.special import logsumexp

from .numerics import binary_entropy, log_binomial_row


class ChannelKind(Enum):
    BSC = "bsc"
    BEC = "bec"


class Symbol(IntEnum):
    """Channel output alphabet; BEC erasures are an explicit third value."""

    ZERO = 0
    ONE = 1
    ERASED = 2


@dataclass(frozen=True)
class ChannelSpec:
    """A memoryless binary channel instance.

    p is the crossover probability for BSC and the erasure probability for
    BEC; n is the blocklength. Bound computations that need positive
    dispersion must check channel_stats(spec).dispersion > 0 themselves.
    """

    kind: ChannelKind
    p: float
    n: int

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"channel parameter must be in [0,1], got {self.p}")
        if self.n < 1:
            raise ValueError(f"blocklength must be >= 1, got {self.n}")


@dataclass(frozen=True)
class ChannelStats:
    capacity: float  # bits per channel use
    dispersion: float  # bits^2 per channel use


@dataclass(frozen=True)
class InfoDensitySpectrum:
    """Distribution of the per-block information density under uniform input.

    The density is linear in a single weight statistic t:
        density(t) = offset + slope * t   [bits]
    For BSC t counts flipped positions (Binomial(n, p)); for BEC t counts
    unerased positions (Binomial(n, 1-p)) and the density on any output that
    disagrees with the input on an unerased position is -inf, which carries
    zero probability under the true channel and so does not appear here.
    weight_log_pmf holds natural-log masses (-inf encoding exact zero).
    """

    offset: float
    slope: float
    weight_log_pmf: np.ndarray


def channel_stats(spec: ChannelSpec) -> ChannelStats:
    """Capacity and dispersion (bits, bits^2) for the uniform input."""
    p = spec.p
    if spec.kind is ChannelKind.BSC:
        capacity = 1.0 - binary_entropy(p)
        if p in (0.0, 1.0) or p == 0.5:
            dispersion = 0.0
        else:
            dispersion = p * (1.0 - p) * math.log2((1.0 - p) / p) ** 2
        return ChannelStats(capacity, dispersion)
    return ChannelStats(1.0 - p, p * (1.0 - p))


def binomial_log_pmf(n: int, p: float) -> np.ndarray:
    """Natural-log Binomial(n, p) masses for t = 0..n."""
    if p == 0.0:
        out = np.full(n + 1, -np.inf)
        out[0] = 0.0
        return out
    if p == 1.0:
        out = np.full(n + 1, -np.inf)
        out[n] = 0.0
        return out
    t = np.arange(n + 1)
    return log_binomial_row(n) + t * math.log(p) + (n - t) * math.log(1.0 - p)


def weight_spectrum(spec: ChannelSpec) -> InfoDensitySpectrum:
    """Information-density spectrum of the channel under uniform input."""
    n, p = spec.n, spec.p
    if spec.kind is ChannelKind.BSC:
        if p == 0.0:
            # deterministic channel: density is n bits at the single weight 0
            return InfoDensitySpectrum(float(n), 0.0, binomial_log_pmf(n, p))
        if p == 1.0:
            # deterministic flip: density is n bits at the single weight n
            return InfoDensitySpectrum(0.0, 1.0, binomial_log_pmf(n, p))
        offset = n * math.log2(2.0 - 2.0 * p)
        slope = math.log2(p / (1.0 - p))
        return InfoDensitySpectrum(offset, slope, binomial_log_pmf(n, p))
    # BEC: t = unerased count, one bit of density per unerased symbol
    return InfoDensitySpectrum(0.0, 1.0, binomial_log_pmf(n, 1.0 - p))


def spectrum_mean_density(spec: InfoDensitySpectrum) -> float:
    """E[density] in bits, evaluated from the log-pmf."""
    t = np.arange(len(spec.weight_log_pmf))
    w = np.exp(spec.weight_log_pmf - logsumexp(spec.weight_log_pmf))
    return float(np.sum(w * (spec.offset + spec.slope * t)))


def transmit(spec: ChannelSpec, x: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Pass a length-n bit vector through the channel once.

    Returns a uint8 symbol vector; BEC erasures appear as Symbol.ERASED.
    The caller owns the rng and any partitioning of its stream.
    """
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (spec.n,):
        raise ValueError(f"input must have shape ({spec.n},), got {x.shape}")
    hit = rng.random(spec.n) < spec.p
    y = x.copy()
    if spec.kind is ChannelKind.BSC:
        y[hit] ^= 1
    else:
        y[hit] = Symbol.ERASED
    return y
