"""Exact rational-arithmetic reference evaluators for the finite-n bounds.

Everything here works over fractions.Fraction so the only approximation in a
comparison is the float rounding of the implementation under test. The tail
sums exploit that the per-term ratio is monotone in the summation index, so
each evaluation needs O(log n) exact comparisons after an O(n) precompute.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Tuple

HALF = Fraction(1, 2)


def binom_weights(n: int, p: Fraction) -> List[Fraction]:
    """Exact Binomial(n, p) masses."""
    q = 1 - p
    return [Fraction(math.comb(n, t)) * p**t * q ** (n - t) for t in range(n + 1)]


class DtTailOracle:
    """Exact sum_t w_t min(1, c * r_t) for a nondecreasing ratio sequence r."""

    def __init__(self, weights: List[Fraction], ratios: List[Fraction]):
        assert all(b >= a for a, b in zip(ratios, ratios[1:])), "ratios must be sorted"
        self.ratios = ratios
        n1 = len(weights)
        self.prefix_wr = [Fraction(0)] * (n1 + 1)  # sum_{t<k} w_t r_t
        self.suffix_w = [Fraction(0)] * (n1 + 1)  # sum_{t>=k} w_t
        for t in range(n1):
            self.prefix_wr[t + 1] = self.prefix_wr[t] + weights[t] * ratios[t]
        for t in range(n1 - 1, -1, -1):
            self.suffix_w[t] = self.suffix_w[t + 1] + weights[t]

    def eval(self, c: Fraction) -> Fraction:
        """Exact bound value for multiplier c >= 0."""
        if c == 0:
            return Fraction(0)
        lo, hi = 0, len(self.ratios)  # first index with c*r >= 1
        while lo < hi:
            mid = (lo + hi) // 2
            if c * self.ratios[mid] >= 1:
                hi = mid
            else:
                lo = mid + 1
        return c * self.prefix_wr[lo] + self.suffix_w[lo]


def bsc_dt_oracle(length: int, p: Fraction) -> DtTailOracle:
    """Ratios 2^-L p^-t (1-p)^(t-L); nondecreasing for p <= 1/2."""
    assert 0 < p <= HALF
    q = 1 - p
    ratios = [
        Fraction(1, 2**length) / (p**t * q ** (length - t)) for t in range(length + 1)
    ]
    return DtTailOracle(binom_weights(length, p), ratios)


def bec_dt_oracle(length: int, p: Fraction) -> DtTailOracle:
    """Ratios 2^(t-L) over the erasure count t."""
    ratios = [Fraction(2**t, 2**length) for t in range(length + 1)]
    return DtTailOracle(binom_weights(length, p), ratios)


def dt_class_bound_exact(kind: str, n: int, p: Fraction, log2M: int, lam: Fraction) -> Fraction:
    oracle = bsc_dt_oracle(n, p) if kind == "bsc" else bec_dt_oracle(n, p)
    return min(Fraction(1), oracle.eval(Fraction(2**log2M) / lam))


def header_ach_bound_exact(
    kind: str, n: int, p: Fraction, n0: int, m: int, log2M: int
) -> Fraction:
    """Header-part plus payload-part homogeneous sums, multiplier (count-1)/2."""
    build = bsc_dt_oracle if kind == "bsc" else bec_dt_oracle
    total = build(n0, p).eval(Fraction(m - 1, 2))
    total += build(n - n0, p).eval(Fraction(2**log2M - 1, 2))
    return min(Fraction(1), total)


class BecConvOracle:
    """Exact sum_l w_l (1 - c * 2^(L-l))^+ ; positive terms form a suffix."""

    def __init__(self, length: int, p: Fraction):
        self.length = length
        weights = binom_weights(length, p)
        n1 = length + 1
        self.pow2 = [Fraction(2 ** (length - l)) for l in range(n1)]
        self.suffix_w = [Fraction(0)] * (n1 + 1)
        self.suffix_wp = [Fraction(0)] * (n1 + 1)  # sum_{l>=k} w_l 2^(L-l)
        for l in range(n1 - 1, -1, -1):
            self.suffix_w[l] = self.suffix_w[l + 1] + weights[l]
            self.suffix_wp[l] = self.suffix_wp[l + 1] + weights[l] * self.pow2[l]

    def eval(self, c: Fraction) -> Fraction:
        """Exact floor value for c = lambda/M (or 1/count)."""
        lo, hi = 0, self.length + 1  # first l with c * 2^(L-l) < 1
        while lo < hi:
            mid = (lo + hi) // 2
            if c * self.pow2[mid] < 1:
                hi = mid
            else:
                lo = mid + 1
        return self.suffix_w[lo] - c * self.suffix_wp[lo]


def converse_eps_bec_exact(n: int, p: Fraction, log2M: int, lam: Fraction) -> Fraction:
    return BecConvOracle(n, p).eval(lam / Fraction(2**log2M))


def header_conv_eps_bec_exact(
    n: int, p: Fraction, n0: int, m: int, log2M: int
) -> Fraction:
    total = BecConvOracle(n0, p).eval(Fraction(1, m))
    total += BecConvOracle(n - n0, p).eval(Fraction(1, 2**log2M))
    return min(Fraction(1), total)


def np_beta_exact_shells(n: int, p: Fraction, alpha: Fraction) -> Fraction:
    """Exact Neyman-Pearson beta via distance shells (needs 0 < p < 1/2)."""
    assert 0 < p < HALF and 0 <= alpha <= 1
    q = 1 - p
    pmass = binom_weights(n, p)
    qmass = [Fraction(math.comb(n, j), 2**n) for j in range(n + 1)]
    det = Fraction(0)
    beta = Fraction(0)
    for j in range(n + 1):
        if det + pmass[j] < alpha:
            det += pmass[j]
            beta += qmass[j]
            continue
        rho = (alpha - det) / pmass[j]
        return beta + rho * qmass[j]
    return beta  # alpha == 1


def np_beta_exact_outputs(n: int, p: Fraction, alpha: Fraction) -> Fraction:
    """Brute-force beta: enumerate all 2^n outputs, sort by likelihood ratio,
    fill detection mass greedily and randomize on the boundary output."""
    assert 0 < p < HALF
    q = 1 - p
    outputs = sorted(range(2**n), key=lambda y: bin(y).count("1"))
    det = Fraction(0)
    beta = Fraction(0)
    qmass = Fraction(1, 2**n)
    for y in outputs:
        d = bin(y).count("1")
        pmass = p**d * q ** (n - d)
        if det + pmass < alpha:
            det += pmass
            beta += qmass
            continue
        rho = (alpha - det) / pmass
        return beta + rho * qmass
    return beta
