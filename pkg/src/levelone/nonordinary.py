"""Non-ordinarity criteria, exponent solvers and constant-term certificates.

The certificates rest on one fact: a weakly holomorphic level-one form of
weight 2 has zero constant term.  Multiplying a form ``f`` of weight ``k`` by a
suitable form of weight ``2 - k`` and reading off the constant term, exactly
and modulo p, yields congruences for the coefficients a_f(p^b).
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm, prod
from typing import Iterable, Optional

from .arith import is_prime
from .certificate import Certificate, check
from .classical import bernoulli, eisenstein, j_invariant
from .errors import (
    BTooSmall,
    CriterionFails,
    EmptyCuspSpace,
    InvalidM,
    InvalidWeight,
    NoDecomposition,
    NotPrime,
    NotRepresentable,
    OrderTooNegative,
    PrecisionTooSmall,
    PreconditionError,
    WeightMismatch,
)
from .hecke import dimensions, is_nonordinary_space
from .qseries import QSeries, frobenius_power, reduce_mod_p, to_precision

A = (4, 6, 8, 10, 14)

# g_m = j E_6^e6 / E_4^e4, listed case by case
G_EXPONENTS = {4: (1, 2), 6: (0, 1), 8: (1, 3), 10: (0, 2), 14: (0, 3)}


def i_power(m: int) -> int:
    """i**m for even m."""
    if m % 2:
        raise ValueError("i**m is only real for even m")
    return -1 if m % 4 == 2 else 1


def g_exponents(m: int) -> tuple[int, int]:
    """(e6, e4) from the closed formulas (1 + i^m)/2 and (m + 1 + 3i^m)/4."""
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    im = i_power(m)
    return (1 + im) // 2, (m + 1 + 3 * im) // 4


def two_m_over_bernoulli(m: int) -> int:
    """2m/B_m for m in A through the closed form 432 - 60m - 432 i^m."""
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    return 432 - 60 * m - 432 * i_power(m)


def _require_prime_at_least_5(p: int) -> None:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if p < 5:
        raise PreconditionError(f"p = {p} must be at least 5")


@lru_cache(maxsize=None)
def g_form(m: int, prec: int) -> QSeries:
    """g_m = j E_6^e6 / E_4^e4, a weakly holomorphic form of weight 2 - m with a simple pole."""
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    e6, e4 = G_EXPONENTS[m]
    assert (e6, e4) == g_exponents(m)

    def build(n: int) -> QSeries:
        return j_invariant(n) * eisenstein(6, n) ** e6 * eisenstein(4, n) ** (-e4)

    g = to_precision(build, prec, start=prec + 1)
    assert g.weight == 2 - m and g.valuation == -1
    return g


@dataclass(frozen=True)
class Criterion:
    k: int
    p: int
    m: Optional[int]

    @property
    def holds(self) -> bool:
        return self.m is not None


def weight_criterion(k: int, p: int) -> Criterion:
    """Smallest m in A with (p - 1) | (k - m), or m = None when there is none."""
    for m in A:
        if (k - m) % (p - 1) == 0:
            return Criterion(k, p, m)
    return Criterion(k, p, None)


@dataclass(frozen=True)
class Part1Exponents:
    p: int
    k: int
    m: int
    a: int
    b: int
    c: int


def solve_part1(p: int, k: int, m: int, b: Optional[int] = None) -> Part1Exponents:
    """Minimal a with k - 2 <= (m - 2)p^a, and c with 2 - k = c(p - 1) - (m - 2)p^b."""
    _require_prime_at_least_5(p)
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    if (k - m) % (p - 1):
        raise CriterionFails(f"(p - 1) = {p - 1} does not divide k - m = {k - m}")
    a = 0
    while k - 2 > (m - 2) * p**a:
        a += 1
    if b is None:
        b = a
    if b < a:
        raise BTooSmall(f"b = {b} is below a = {a}: k - 2 = {k - 2} > (m - 2)p^b = {(m - 2) * p**b}")
    num = (m - 2) * p**b + 2 - k
    c, rem = divmod(num, p - 1)
    assert rem == 0 and c >= 0
    return Part1Exponents(p, k, m, a, b, c)


def _check_form(f: QSeries, k: int, p: int, need_prec: int) -> None:
    if f.weight is not None and f.weight != k:
        raise WeightMismatch(f"f has declared weight {f.weight}, expected {k}")
    if f.prec <= need_prec:
        raise PrecisionTooSmall(f"f is known to O(q^{f.prec}); need coefficients through q^{need_prec}")
    reduce_mod_p(f, p)  # raises when a denominator is divisible by p


def _weight_two(name: str, total: int):
    # the vanishing check is meaningless for any other weight
    if total != 2:
        raise WeightMismatch(f"{name} has weight {total}, not 2")
    return check(name, total, 2)


def _constant_term(build, start: int):
    s = to_precision(build, 1, start=start)
    return s.coefficient(0)


def certify_theorem1(f: QSeries, k: int, p: int, m: Optional[int] = None, b: Optional[int] = None,
                     exact: bool = True) -> Certificate:
    """Certificate for a_f(p^b) = -(2m/B_m) a_f(0) (mod p).

    ``exact=True`` evaluates the weight-2 product g_m^(p^b) E_(p-1)^c f over
    the rationals in addition to the Frobenius-accelerated reduction modulo p;
    ``exact=False`` runs only the reduction.
    """
    if m is None:
        m = weight_criterion(k, p).m
        if m is None:
            raise CriterionFails(f"no m in {A} with {p - 1} | {k} - m")
    ex = solve_part1(p, k, m, b)
    a, b, c = ex.a, ex.b, ex.c
    big = p**b
    if not f.is_zero and f.valuation <= -(p**a):
        raise OrderTooNegative(f"ord(f) = {f.valuation} is not > -p^a = {-(p**a)}")
    _check_form(f, k, p, big)
    vf = min(f.valuation, 0)

    checks = [
        check("(k - m) mod (p - 1)", (k - m) % (p - 1), 0),
        check("k - 2 <= (m - 2) p^a", f"{k - 2} <= {(m - 2) * p**a}", "true", k - 2 <= (m - 2) * p**a),
        check("ord(f) > -p^a", f.valuation, f"> {-(p**a)}", f.valuation > -(p**a)),
        check("2 - k = c(p - 1) - (m - 2) p^b", c * (p - 1) - (m - 2) * big, 2 - k),
        _weight_two("weight of g_m^(p^b) E_(p-1)^c f", (2 - m) * big + (p - 1) * c + k),
    ]
    if exact:
        def build(n):
            return g_form(m, n) ** big * eisenstein(p - 1, n) ** c * f
        checks.append(check("exact constant term of g_m^(p^b) E_(p-1)^c f", _constant_term(build, big - vf + 2), 0))

    fbar = reduce_mod_p(f, p)

    def build_mod(n):
        return frobenius_power(reduce_mod_p(g_form(m, n), p), big) * fbar

    checks.append(check("constant term of g_m^(p^b) f mod p", _constant_term(build_mod, 2), 0))

    closed = two_m_over_bernoulli(m)
    checks.append(check("2m/B_m = 432 - 60m - 432 i^m", Fraction(2 * m) / bernoulli(m), closed))
    af0, afpb = f.coefficient(0), f.coefficient(big)
    checks.append(check("a_f(p^b) + (2m/B_m) a_f(0) mod p", _residue(afpb + closed * af0, p), 0))
    params = {"m": m, "a": a, "b": b, "c": c}
    return Certificate("theorem1", k, p, params, tuple(checks))


def _residue(x, p: int) -> int:
    x = Fraction(x)
    if x.denominator % p == 0:
        raise PreconditionError(f"{x} is not p-integral at p = {p}")
    return x.numerator * pow(x.denominator, -1, p) % p


def decompose_part2(k: int, p: int, max_t: Optional[int] = None) -> list[tuple[int, int, int]]:
    """All (r, s, t) with 2 - k = r(p - 1) + s p^t, r, s >= 0, s != 2, t >= 1.

    When s = 0 the exponent t is unconstrained; t then ranges up to the
    largest value with p^t <= max(2 - k, p), or up to ``max_t`` if given.
    Sorted by t descending, then s ascending.
    """
    if k % 2:
        raise InvalidWeight(f"weight {k} is odd")
    if k > 2:
        raise InvalidWeight(f"weight {k} exceeds 2")
    n = 2 - k
    if max_t is None:
        max_t = 1
        while p ** (max_t + 1) <= max(n, p):
            max_t += 1
    out = []
    for t in range(1, max_t + 1):
        pt = p**t
        for s in range(n // pt + 1):
            if s == 2:
                continue
            r, rem = divmod(n - s * pt, p - 1)
            if rem == 0:
                out.append((r, s, t))
    out.sort(key=lambda rst: (-rst[2], rst[1]))
    for r, s, t in out:
        assert s % 2 == 0, (r, s, t)
    return out


def four_six_rep(n: int) -> tuple[int, int]:
    """(c1, c2) with 4 c1 + 6 c2 = n and c1 as large as possible."""
    if n < 0 or n % 2 or n == 2:
        raise NotRepresentable(f"{n} is not of the form 4 c1 + 6 c2")
    c2 = 0 if n % 4 == 0 else 1
    return (n - 6 * c2) // 4, c2


@dataclass(frozen=True)
class Part2Exponents:
    p: int
    k: int
    r: int
    s: int
    t: int
    u: int
    v: int
    c1: int
    c2: int
    c1p: int
    c2p: int


def solve_part2(k: int, p: int, u: int, v: int,
                decomposition: Optional[tuple[int, int, int]] = None) -> Part2Exponents:
    _require_prime_at_least_5(p)
    if not 1 <= u <= v:
        raise PreconditionError(f"need 1 <= u <= v, got u = {u}, v = {v}")
    if decomposition is None:
        found = [d for d in decompose_part2(k, p, max_t=None) if d[2] >= v]
        if not found:
            found = [d for d in decompose_part2(k, p, max_t=v) if d[2] >= v]
        if not found:
            raise NoDecomposition(f"no 2 - k = r(p - 1) + s p^t with s != 2 and t >= {v} for k = {k}, p = {p}")
        decomposition = found[0]
    r, s, t = decomposition
    if k > 2:
        raise InvalidWeight(f"weight {k} exceeds 2")
    if 2 - k != r * (p - 1) + s * p**t or min(r, s) < 0 or t < 1 or s == 2:
        raise NoDecomposition(f"{decomposition} is not an admissible decomposition of {2 - k}")
    if v > t:
        raise PreconditionError(f"need v <= t, got v = {v}, t = {t}")
    c1, c2 = four_six_rep(s * p ** (t - u))
    c1p, c2p = four_six_rep(s * p ** (t - v))
    return Part2Exponents(p, k, r, s, t, u, v, c1, c2, c1p, c2p)


def certify_theorem2(f: QSeries, k: int, p: int, u: int, v: int,
                     decomposition: Optional[tuple[int, int, int]] = None) -> Certificate:
    """Certificate for a_f(p^v) = a_f(0) = 0 (mod p) when k <= 2."""
    if k > 2:
        raise InvalidWeight(f"weight {k} exceeds 2")
    ex = solve_part2(k, p, u, v, decomposition)
    r, s, t, c1, c2, c1p, c2p = ex.r, ex.s, ex.t, ex.c1, ex.c2, ex.c1p, ex.c2p
    pu, pv = p**u, p**v
    if not f.is_zero and f.valuation <= -pu:
        raise OrderTooNegative(f"ord(f) = {f.valuation} is not > -p^u = {-pu}")
    _check_form(f, k, p, pv)
    vf = min(f.valuation, 0)

    checks = [
        check("2 - k = r(p - 1) + s p^t", r * (p - 1) + s * p**t, 2 - k),
        check("4 c1 + 6 c2 = s p^(t-u)", 4 * c1 + 6 * c2, s * p ** (t - u)),
        check("4 c1' + 6 c2' = s p^(t-v)", 4 * c1p + 6 * c2p, s * p ** (t - v)),
        check("ord(f) > -p^u", f.valuation, f"> {-pu}", f.valuation > -pu),
        _weight_two("weight of (E4^c1 E6^c2)^(p^u) E_(p-1)^r f", (4 * c1 + 6 * c2) * pu + (p - 1) * r + k),
    ]

    def build1(n):
        return eisenstein(4, n) ** (c1 * pu) * eisenstein(6, n) ** (c2 * pu) * eisenstein(p - 1, n) ** r * f

    checks.append(check("exact constant term of (E4^c1 E6^c2)^(p^u) E_(p-1)^r f",
                        _constant_term(build1, 2 - vf), 0))
    af0, afpv = f.coefficient(0), f.coefficient(pv)
    checks.append(check("a_f(0) mod p", _residue(af0, p), 0))
    checks.append(_weight_two("weight of j^(p^v) (E4^c1' E6^c2')^(p^v) E_(p-1)^r f",
                              (4 * c1p + 6 * c2p) * pv + (p - 1) * r + k))

    def build2(n):
        return (j_invariant(n) ** pv * eisenstein(4, n) ** (c1p * pv) * eisenstein(6, n) ** (c2p * pv)
                * eisenstein(p - 1, n) ** r * f)

    checks.append(check("exact constant term of j^(p^v) (E4^c1' E6^c2')^(p^v) E_(p-1)^r f",
                        _constant_term(build2, pv - vf + 2), 0))
    shift = 744 + 240 * c1p - 504 * c2p
    checks.append(check("a_f(p^v) + (744 + 240 c1' - 504 c2') a_f(0) mod p", _residue(afpv + shift * af0, p), 0))
    checks.append(check("a_f(p^v) mod p", _residue(afpv, p), 0))
    params = {"r": r, "s": s, "t": t, "u": u, "v": v, "c1": c1, "c2": c2, "c1p": c1p, "c2p": c2p}
    return Certificate("theorem2", k, p, params, tuple(checks))


def hatada_certificate(k: int, p: int) -> Certificate:
    return Certificate("hatada", k, p, {}, (check("p in {2, 3}", p, "2 or 3", p in (2, 3)),))


def criterion_certificate(k: int, p: int) -> Certificate:
    """Certificate that the weight criterion applies at (k, p), with the part (1) exponents."""
    crit = weight_criterion(k, p)
    if not crit.holds:
        raise CriterionFails(f"no m in {A} with {p - 1} | {k} - m")
    ex = solve_part1(p, k, crit.m)
    checks = (
        check("(k - m) mod (p - 1)", (k - crit.m) % (p - 1), 0),
        check("k - 2 <= (m - 2) p^a", f"{k - 2} <= {(crit.m - 2) * p**ex.a}", "true",
              k - 2 <= (crit.m - 2) * p**ex.a),
        check("2 - k = c(p - 1) - (m - 2) p^b", ex.c * (p - 1) - (crit.m - 2) * p**ex.b, 2 - k),
    )
    return Certificate("weight-criterion", k, p, {"m": crit.m, "a": ex.a, "b": ex.b, "c": ex.c}, checks)


def nilpotency_certificate(k: int, p: int) -> Certificate:
    """Certificate that charpoly(T_p | S_k) = x^dim (mod p)."""
    ok, data = is_nonordinary_space(k, p)
    dim = data.dim
    target = [0] * dim + [1]
    checks = (
        check("charpoly(T_p) monic of degree dim S_k", f"degree {len(data.charpoly) - 1}, leading {data.charpoly[-1]}",
              f"degree {dim}, leading 1"),
        check("charpoly(T_p) mod p, constant term first", list(data.charpoly_mod_p), target),
    )
    assert ok == checks[-1].passed
    return Certificate("nilpotency", k, p, {"dim": dim}, checks)


def _strip_small(primes: Iterable[int]) -> list[int]:
    ps = sorted(set(primes))
    for p in ps:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
    rest = [p for p in ps if p >= 5]
    if not rest:
        raise PreconditionError("the prime set has no prime >= 5")
    return rest


def family_weight(primes: Iterable[int], j: int, m: int, use_lcm: bool = False) -> int:
    """k = j * prod(p - 1) + m over the primes >= 5 (or the lcm of the p - 1)."""
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    if j < 0:
        raise ValueError("j must be nonnegative")
    steps = [p - 1 for p in _strip_small(primes)]
    return j * (lcm(*steps) if use_lcm else prod(steps)) + m


def family_b(primes: Iterable[int], k: int, m: int) -> int:
    """Smallest b >= 0 with k - 2 < (m - 2) p^b for every prime p >= 5 in the set."""
    if m not in A:
        raise InvalidM(f"m = {m} is not in {A}")
    ps = _strip_small(primes)
    b = 0
    while not all(k - 2 < (m - 2) * p**b for p in ps):
        b += 1
    return b


@dataclass
class NonordinaryTable:
    """Cells (p, k) where every eigenform of S_k is certified non-ordinary at p."""

    primes: list[int]
    weights: list[int]
    entries: dict[tuple[int, int], Certificate] = field(default_factory=dict)
    verification: dict[tuple[int, int], Certificate] = field(default_factory=dict)
    extras: list[tuple[int, int]] = field(default_factory=list)
    mismatches: list[tuple[int, int]] = field(default_factory=list)

    def row(self, p: int) -> list[int]:
        return [k for k in self.weights if (p, k) in self.entries]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p"] + self.weights)
        for p in self.primes:
            w.writerow([p] + ["x" if (p, k) in self.entries else "" for k in self.weights])
        return buf.getvalue()

    def to_markdown(self) -> str:
        lines = ["| p | " + " | ".join(str(k) for k in self.weights) + " |",
                 "|---|" + "---|" * len(self.weights)]
        for p in self.primes:
            cells = [str(k) if (p, k) in self.entries else "" for k in self.weights]
            lines.append(f"| {p} | " + " | ".join(cells) + " |")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "primes": self.primes,
            "weights": self.weights,
            "rows": {str(p): self.row(p) for p in self.primes},
            "certificates": [self.entries[key].to_dict() for key in sorted(self.entries)],
            "verification": [self.verification[key].to_dict() for key in sorted(self.verification)],
            "extras": [list(key) for key in self.extras],
            "mismatches": [list(key) for key in self.mismatches],
        }


def _nilpotency_cell(cell: tuple[int, int]) -> Optional[Certificate]:
    p, k = cell
    try:
        return nilpotency_certificate(k, p)
    except EmptyCuspSpace:
        return None


def nonordinary_table(primes: Iterable[int], k_min: int, k_max: int, cross_verify: bool = False,
                      jobs: int = 1) -> NonordinaryTable:
    ps = sorted(set(primes))
    for p in ps:
        if not is_prime(p):
            raise NotPrime(f"{p} is not prime")
    if k_min % 2 or k_min < 12:
        raise InvalidWeight(f"k_min = {k_min} must be even and at least 12")
    table = NonordinaryTable(ps, list(range(k_min, k_max + 1, 2)))
    for p in ps:
        for k in table.weights:
            if p in (2, 3):
                table.entries[p, k] = hatada_certificate(k, p)
            elif weight_criterion(k, p).holds:
                table.entries[p, k] = criterion_certificate(k, p)
    if cross_verify:
        cells = [(p, k) for p in ps for k in table.weights if dimensions(k)[1] >= 1]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                results = list(pool.map(_nilpotency_cell, cells))
        else:
            results = [_nilpotency_cell(cell) for cell in cells]
        for cell, cert in zip(cells, results):
            if cert is None:
                continue
            table.verification[cell] = cert
            if cell in table.entries and not cert.verified:
                table.mismatches.append(cell)
            elif cell not in table.entries and cert.verified:
                table.extras.append(cell)
    return table
