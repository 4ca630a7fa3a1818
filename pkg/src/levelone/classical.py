"""Bernoulli numbers, Eisenstein series, the discriminant, j, and weight-2 forms."""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .arith import divisor_sigma
from .errors import InvalidWeight, OddWeight
from .qseries import QSeries, to_precision


class BernoulliCache:
    """Memo of B_0, B_1, ... built from sum_{i=0}^{n} C(n+1, i) B_i = 0.

    B_1 = -1/2 is stored because the recurrence needs it.
    """

    def __init__(self):
        self.values: dict[int, Fraction] = {0: Fraction(1)}
        self._lock = threading.Lock()

    def __call__(self, k: int) -> Fraction:
        if k < 0:
            raise ValueError("Bernoulli index must be nonnegative")
        with self._lock:
            for n in range(len(self.values), k + 1):
                s = sum(comb(n + 1, i) * self.values[i] for i in range(n))
                self.values[n] = -s / (n + 1)
            return self.values[k]


bernoulli = BernoulliCache()


def eisenstein_factor(k: int) -> Fraction:
    """The multiplier -2k/B_k in front of the divisor sums of E_k."""
    return -2 * k / bernoulli(k)


@lru_cache(maxsize=None)
def eisenstein(k: int, prec: int) -> QSeries:
    """Normalized E_k = 1 - (2k/B_k) sum sigma_{k-1}(n) q^n; E_0 is the constant 1."""
    if k % 2 or k == 2 or k < 0:
        raise InvalidWeight(f"E_{k} is not a holomorphic level-one Eisenstein series")
    if k == 0:
        return QSeries([1], 0, prec, weight=0)
    factor = eisenstein_factor(k)
    cs = [1] + [factor * divisor_sigma(n, k - 1) for n in range(1, prec)]
    return QSeries(cs, 0, prec, weight=k)


@lru_cache(maxsize=None)
def _euler_product(length: int) -> QSeries:
    cs = [0] * length
    if length:
        cs[0] = 1
    for n in range(1, length):
        # multiply in place by (1 - q^n)
        for i in range(length - 1, n - 1, -1):
            cs[i] -= cs[i - n]
    return QSeries(cs, 0, length, weight=None)


@lru_cache(maxsize=None)
def delta(prec: int) -> QSeries:
    """Delta = q prod_{n>=1} (1 - q^n)^24."""
    if prec <= 1:
        return QSeries([], prec, prec, weight=12)
    eta24 = _euler_product(prec - 1) ** 24
    return eta24.shift(1).with_weight(12)


@lru_cache(maxsize=None)
def j_invariant(prec: int) -> QSeries:
    """j = E_4^3 / Delta = q^-1 + 744 + 196884 q + ..."""
    return eisenstein(4, prec + 2) ** 3 * delta(prec + 2).inverse()


def delta_residue(k: int) -> int:
    """The element of {0, 4, 6, 8, 10, 14} congruent to k modulo 12."""
    if k % 2:
        raise OddWeight(f"weight {k} is odd")
    r = k % 12
    return 14 if r == 2 else r


@lru_cache(maxsize=None)
def e14(prec: int) -> QSeries:
    return eisenstein(4, prec) ** 2 * eisenstein(6, prec)


def weight2_form(poly: Sequence, prec: int) -> QSeries:
    """P(j) E_14 / Delta for P given by coefficients from the constant term upward.

    Every such series is a weight-2 weakly holomorphic form (in fact the
    derivative of a polynomial in j), so its constant term vanishes.
    """
    if not poly:
        raise ValueError("polynomial must have at least one coefficient")
    coeffs = [Fraction(c) for c in poly]

    def build(n: int) -> QSeries:
        j = j_invariant(n)
        acc = QSeries([coeffs[-1]], 0, n, weight=0)
        for c in reversed(coeffs[:-1]):
            acc = acc * j + c
        return acc * e14(n + 2) * delta(n + 2).inverse()

    return to_precision(build, prec, start=prec + 2 * len(coeffs) + 2).with_weight(2)
