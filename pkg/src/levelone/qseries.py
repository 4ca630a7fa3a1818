"""Truncated Laurent series in q.

Two coefficient rings are provided:

* :class:`QSeries` holds exact rationals (``int`` where the value is integral,
  :class:`fractions.Fraction` otherwise).
* :class:`ModPSeries` holds residues modulo a prime ``p``.

A series stores the coefficients for exponents ``valuation .. prec - 1`` and is
known only modulo ``O(q^prec)``.  The zero series keeps its ``prec`` and sets
``valuation == prec`` with no stored coefficients, so ``O(q^N)`` is a value in
its own right.

Products follow the sound window rule::

    prec(a*b) = min(prec(a) + val(b), prec(b) + val(a))

Every series may carry a declared modular ``weight``; products add weights,
powers scale them, and sums keep a weight only when both sides agree.

Values are immutable; all operations return new series.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from numbers import Rational
from typing import Callable, Iterator, Optional, Sequence, Union

from .arith import is_prime
from .errors import (
    BeyondPrecision,
    DenominatorDivisibleByP,
    NegativePowerOfZero,
    NotPrime,
    PrecisionTooSmall,
)

Coefficient = Union[int, Fraction]

# below this length the schoolbook product beats packing into one big integer
_KRONECKER_CUTOFF = 20


def _schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    lb = len(b)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(min(lb, n - i)):
            out[i + j] += x * b[j]
    return out


def _pack(cs: Sequence[int], width: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(width, "little") for c in cs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(width, "little") for c in cs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """Product via Kronecker substitution: evaluate at 2**(8*width), multiply, unpack."""
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    if bound == 0:
        return [0] * n
    width = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * width - 1)
    m = len(a) + len(b) - 1
    product = _pack(a, width) * _pack(b, width)
    # bias every digit by half so the packed product has no borrows
    product += int.from_bytes((b"\x00" * (width - 1) + b"\x80") * m, "little")
    raw = product.to_bytes(width * m, "little")
    out = [
        int.from_bytes(raw[i * width:(i + 1) * width], "little") - half
        for i in range(min(n, m))
    ]
    out.extend([0] * (n - len(out)))
    return out


def convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer coefficient lists."""
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) < _KRONECKER_CUTOFF:
        return _schoolbook(a, b, n)
    return _kronecker(a, b, n)


def _coerce(c) -> Coefficient:
    if isinstance(c, bool):
        return int(c)
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, Rational):
        return _coerce(Fraction(c.numerator, c.denominator))
    raise TypeError(f"series coefficients must be exact rationals, got {type(c).__name__}")


def _normalize(c: Coefficient) -> Coefficient:
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def _common_denominator(cs: Sequence[Coefficient]) -> tuple[list[int], int]:
    den = 1
    for c in cs:
        if type(c) is not int:
            den = lcm(den, c.denominator)
    if den == 1:
        return list(cs), 1
    return [c * den if type(c) is int else c.numerator * (den // c.denominator) for c in cs], den


def _is_scalar(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class _LaurentSeries:
    """Shared shape and arithmetic; subclasses provide the coefficient ring."""

    __slots__ = ("valuation", "coeffs", "prec", "weight")

    def _init(self, cs: list, valuation: int, prec: int, weight: Optional[int]) -> None:
        if prec < valuation:
            raise ValueError(f"prec {prec} is below valuation {valuation}")
        width = prec - valuation
        if len(cs) > width:
            cs = cs[:width]
        start = 0
        while start < len(cs) and not cs[start]:
            start += 1
        if start == len(cs):
            valuation, cs = prec, []
        else:
            valuation += start
            cs = cs[start:]
            cs.extend([0] * (prec - valuation - len(cs)))
        object.__setattr__(self, "valuation", valuation)
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "weight", weight)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    # ring hooks
    def _new(self, cs: list, valuation: int, prec: int, weight: Optional[int]):
        raise NotImplementedError

    def _reduce(self, c):
        raise NotImplementedError

    def _unit_inverse(self, c):
        raise NotImplementedError

    def _mul_coeffs(self, a: Sequence, b: Sequence, n: int) -> list:
        raise NotImplementedError

    def _check_compatible(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")

    # shape
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def relative_prec(self) -> int:
        return self.prec - self.valuation

    def coefficient(self, n: int):
        if n >= self.prec:
            raise BeyondPrecision(f"q^{n} is beyond the precision O(q^{self.prec})")
        if n < self.valuation:
            return 0
        return self.coeffs[n - self.valuation]

    __getitem__ = coefficient

    def items(self, start: Optional[int] = None) -> Iterator[tuple[int, object]]:
        """Yield ``(n, a(n))`` for every exponent from ``start`` (default: valuation) to prec - 1."""
        lo = self.valuation if start is None else start
        for n in range(lo, self.prec):
            yield n, self.coefficient(n)

    def window(self, lo: int, hi: int) -> list:
        """Coefficients for exponents ``lo .. hi - 1``; ``hi`` may not exceed ``prec``."""
        if hi > self.prec:
            raise BeyondPrecision(f"q^{hi - 1} is beyond the precision O(q^{self.prec})")
        out = [0] * max(hi - lo, 0)
        for idx, c in enumerate(self.coeffs):
            e = self.valuation + idx
            if lo <= e < hi:
                out[e - lo] = c
        return out

    def truncate(self, prec: int):
        prec = min(prec, self.prec)
        if prec <= self.valuation:
            return self._new([], prec, prec, self.weight)
        return self._new(list(self.coeffs[: prec - self.valuation]), self.valuation, prec, self.weight)

    def shift(self, n: int):
        """Multiply by ``q^n``."""
        return self._new(list(self.coeffs), self.valuation + n, self.prec + n, self.weight)

    def with_weight(self, weight: Optional[int]):
        return self._new(list(self.coeffs), self.valuation, self.prec, weight)

    # arithmetic
    def __neg__(self):
        return self._new([self._reduce(-c) for c in self.coeffs], self.valuation, self.prec, self.weight)

    def __add__(self, other):
        if _is_scalar(other):
            if self.prec <= 0 or not other:
                return self
            weight = self.weight if self.weight in (0, None) else None
            lo = min(self.valuation, 0)
            cs = self.window(lo, self.prec)
            cs[-lo] = self._reduce(cs[-lo] + other)
            return self._new(cs, lo, self.prec, weight)
        if not isinstance(other, _LaurentSeries):
            return NotImplemented
        self._check_compatible(other)
        prec = min(self.prec, other.prec)
        lo = min(self.valuation, other.valuation, prec)
        a = self.window(lo, prec)
        b = other.window(lo, prec)
        weight = self.weight if self.weight == other.weight else None
        return self._new([self._reduce(x + y) for x, y in zip(a, b)], lo, prec, weight)

    __radd__ = __add__

    def __sub__(self, other):
        if _is_scalar(other):
            return self + (-other)
        if not isinstance(other, _LaurentSeries):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_scalar(other):
            return self._new([self._reduce(c * other) for c in self.coeffs], self.valuation, self.prec, self.weight)
        if not isinstance(other, _LaurentSeries):
            return NotImplemented
        self._check_compatible(other)
        valuation = self.valuation + other.valuation
        prec = min(self.prec + other.valuation, other.prec + self.valuation)
        cs = self._mul_coeffs(self.coeffs, other.coeffs, prec - valuation)
        weight = None if self.weight is None or other.weight is None else self.weight + other.weight
        return self._new(cs, valuation, prec, weight)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_scalar(other):
            return self * self._unit_inverse(other)
        if not isinstance(other, _LaurentSeries):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        if _is_scalar(other):
            return self.inverse() * other
        return NotImplemented

    def inverse(self):
        """Exact reciprocal by back-substitution on the convolution equations."""
        if self.is_zero:
            raise NegativePowerOfZero("the zero series has no inverse")
        u = self.coeffs
        inv0 = self._unit_inverse(u[0])
        length = self.relative_prec
        b = [inv0]
        for n in range(1, length):
            s = 0
            for i in range(1, min(n, len(u) - 1) + 1):
                if u[i]:
                    s += u[i] * b[n - i]
            b.append(self._reduce(-s * inv0))
        weight = None if self.weight is None else -self.weight
        return self._new(b, -self.valuation, length - self.valuation, weight)

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            if self.is_zero:
                raise NegativePowerOfZero("negative power of the zero series")
            return self.inverse() ** (-e)
        if e == 0:
            prec = self.prec if self.is_zero else self.relative_prec
            return self._new([1], 0, max(prec, 0), 0 if self.weight is not None else None)
        result = None
        base = self
        while True:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if not e:
                return result
            base = base * base

    # comparison and display
    def _key(self):
        return (self.valuation, self.prec, self.coeffs)

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__,) + self._key())

    def _format_terms(self, limit: int = 8) -> str:
        out = ""
        shown = 0
        for idx, c in enumerate(self.coeffs):
            if not c:
                continue
            if shown == limit:
                out += " + ..."
                break
            e = self.valuation + idx
            mono = "" if e == 0 else ("q" if e == 1 else f"q^{e}")
            neg = c < 0 if type(self) is QSeries else False
            mag = -c if neg else c
            term = str(mag) if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            out += (" - " if neg else " + ") + term if out else ("-" if neg else "") + term
            shown += 1
        tail = f"O(q^{self.prec})"
        return f"{out} + {tail}" if out else tail

    def __str__(self):
        return self._format_terms()


class QSeries(_LaurentSeries):
    """Laurent series with exact rational coefficients, known modulo ``O(q^prec)``."""

    __slots__ = ()

    def __init__(self, coeffs: Sequence = (), valuation: int = 0, prec: Optional[int] = None,
                 weight: Optional[int] = None):
        cs = [_coerce(c) for c in coeffs]
        if prec is None:
            prec = valuation + len(cs)
        self._init(cs, valuation, prec, weight)

    def _new(self, cs, valuation, prec, weight):
        out = object.__new__(QSeries)
        out._init(list(cs), valuation, prec, weight)
        return out

    def _reduce(self, c):
        return _normalize(c)

    def _unit_inverse(self, c):
        return _normalize(Fraction(1, c) if type(c) is int else 1 / c)

    def _mul_coeffs(self, a, b, n):
        ia, da = _common_denominator(a[:n])
        ib, db = _common_denominator(b[:n])
        out = convolve(ia, ib, n)
        den = da * db
        if den == 1:
            return out
        return [_normalize(Fraction(x, den)) for x in out]

    @property
    def is_integral(self) -> bool:
        return all(type(c) is int for c in self.coeffs)

    def __reduce__(self):
        return (QSeries, (self.coeffs, self.valuation, self.prec, self.weight))

    def __repr__(self):
        return f"QSeries({self._format_terms()}, weight={self.weight})"


class ModPSeries(_LaurentSeries):
    """Laurent series with coefficients in Z/pZ, known modulo ``O(q^prec)``."""

    __slots__ = ("modulus",)

    def __init__(self, coeffs: Sequence[int] = (), valuation: int = 0, prec: Optional[int] = None,
                 *, modulus: int, weight: Optional[int] = None):
        if not is_prime(modulus):
            raise NotPrime(f"modulus {modulus} is not prime")
        object.__setattr__(self, "modulus", modulus)
        cs = [int(c) % modulus for c in coeffs]
        if prec is None:
            prec = valuation + len(cs)
        self._init(cs, valuation, prec, weight)

    def _new(self, cs, valuation, prec, weight):
        out = object.__new__(ModPSeries)
        object.__setattr__(out, "modulus", self.modulus)
        out._init(list(cs), valuation, prec, weight)
        return out

    def _reduce(self, c):
        return c % self.modulus

    def _unit_inverse(self, c):
        return pow(c, -1, self.modulus)

    def _mul_coeffs(self, a, b, n):
        p = self.modulus
        return [x % p for x in convolve(a, b, n)]

    def _check_compatible(self, other):
        super()._check_compatible(other)
        if other.modulus != self.modulus:
            raise ValueError(f"moduli differ: {self.modulus} and {other.modulus}")

    def _key(self):
        return (self.modulus,) + super()._key()

    def frobenius(self) -> "ModPSeries":
        """Substitute ``q -> q^p``; equals the p-th power modulo p."""
        p = self.modulus
        cs = [0] * (p * len(self.coeffs))
        cs[::p] = self.coeffs
        weight = None if self.weight is None else p * self.weight
        return self._new(cs, p * self.valuation, p * self.prec, weight)

    def __reduce__(self):
        return (_restore_modp, (self.coeffs, self.valuation, self.prec, self.modulus, self.weight))

    def __repr__(self):
        return f"ModPSeries({self._format_terms()}, modulus={self.modulus})"


def _restore_modp(coeffs, valuation, prec, modulus, weight):
    return ModPSeries(coeffs, valuation, prec, modulus=modulus, weight=weight)


Series = Union[QSeries, ModPSeries]


def add(a: Series, b: Series) -> Series:
    return a + b


def multiply(a: Series, b: Series) -> Series:
    return a * b


def power(a: Series, e: int) -> Series:
    return a**e


def coefficient(a: Series, n: int):
    return a.coefficient(n)


def reduce_mod_p(a: QSeries, p: int) -> ModPSeries:
    """Reduce every stored coefficient modulo the prime ``p``."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    cs = []
    for idx, c in enumerate(a.coeffs):
        if type(c) is int:
            cs.append(c % p)
        else:
            if c.denominator % p == 0:
                raise DenominatorDivisibleByP(a.valuation + idx, p)
            cs.append(c.numerator * pow(c.denominator, -1, p) % p)
    return ModPSeries(cs, a.valuation, a.prec, modulus=p, weight=a.weight)


def frobenius_power(a: ModPSeries, e: int) -> ModPSeries:
    """``a**e`` modulo p, replacing every p-th power by the substitution ``q -> q^p``.

    Because ``(A + O(q^N))^p = A(q^p) + O(q^(pN))`` modulo p, each Frobenius
    step multiplies both valuation and precision by p; the result is
    therefore at least as precise as the literal power.
    """
    if e < 0:
        raise ValueError("frobenius_power needs a nonnegative exponent")
    if e == 0:
        return a**0
    high, low = divmod(e, a.modulus)
    if not high:
        return a**low
    result = frobenius_power(a, high).frobenius()
    if low:
        result = result * a**low
    return result


def to_precision(build: Callable[[int], Series], prec: int, start: Optional[int] = None,
                 max_rounds: int = 16) -> Series:
    """Call ``build(n)`` with growing working precision until the result reaches ``prec``.

    Construction losses (inversions, negative valuations) are usually linear
    in ``n`` with slope one, so one correction step normally suffices.
    """
    n = prec if start is None else start
    for _ in range(max_rounds):
        s = build(n)
        if s.prec >= prec:
            return s.truncate(prec)
        n += max(prec - s.prec, 1)
    raise PrecisionTooSmall(f"could not reach O(q^{prec}) after {max_rounds} rounds")
