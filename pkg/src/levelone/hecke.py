"""Level-one spaces M_k, S_k with their Miller bases, and Hecke operators T_p."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .arith import is_prime
from .classical import delta, eisenstein
from .errors import (
    DimensionNotOne,
    EmptyCuspSpace,
    InvalidWeight,
    NotPrime,
    PrecisionTooSmall,
)
from .qseries import QSeries


def dimensions(k: int) -> tuple[int, int]:
    """(dim M_k, dim S_k) for even k >= 4."""
    if k < 4 or k % 2:
        raise InvalidWeight(f"weight {k} must be even and at least 4")
    dim_m = k // 12 if k % 12 == 2 else k // 12 + 1
    return dim_m, dim_m - 1


@dataclass(frozen=True)
class FormSpace:
    weight: int
    dim_M: int
    dim_S: int
    basis: tuple[QSeries, ...]
    prec: int

    @property
    def cusp_basis(self) -> tuple[QSeries, ...]:
        return self.basis[1:]


def _four_six(w: int) -> tuple[int, int]:
    b = 0 if w % 4 == 0 else 1
    return (w - 6 * b) // 4, b


@lru_cache(maxsize=None)
def miller_basis(k: int, prec: int) -> FormSpace:
    """The basis f_i = q^i + O(q^dim M_k) of M_k, computed to ``O(q^prec)``.

    Starts from Delta^i E_4^a E_6^b (4a + 6b = k - 12i), which is already
    triangular with unit leading coefficients, then clears the entries above
    the diagonal.  Integrality is asserted.
    """
    dim_m, dim_s = dimensions(k)
    if prec < dim_m:
        raise PrecisionTooSmall(f"prec {prec} is below dim M_{k} = {dim_m}")
    d = delta(prec)
    forms = []
    for i in range(dim_m):
        a, b = _four_six(k - 12 * i)
        f = eisenstein(4, prec) ** a * eisenstein(6, prec) ** b
        if i:
            f = f * d**i
        f = f.truncate(prec)
        forms.append(f.with_weight(k))
    for j in range(dim_m):
        for i in range(j + 1, dim_m):
            c = forms[j].coefficient(i)
            if c:
                forms[j] = forms[j] - forms[i] * c
    for i, f in enumerate(forms):
        assert f.prec == prec and f.is_integral, f"basis form {i} of weight {k} is not integral"
        assert f.window(0, dim_m) == [int(i == n) for n in range(dim_m)]
    return FormSpace(k, dim_m, dim_s, tuple(forms), prec)


def charpoly(matrix) -> tuple[int, ...]:
    """Characteristic polynomial det(xI - A) of an integer matrix, constant term first.

    Faddeev-LeVerrier; every division is exact over the integers.
    """
    n = len(matrix)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    m = [[0] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{n-k+1} I
        am = [[sum(matrix[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        for i in range(n):
            am[i][i] += coeffs[n - k + 1]
        m = am
        tr = sum(matrix[i][t] * m[t][i] for i in range(n) for t in range(n))
        assert tr % k == 0
        coeffs[n - k] = -tr // k
    return tuple(coeffs)


@dataclass(frozen=True)
class HeckeData:
    """T_p on the cuspidal Miller basis.

    Row i of ``matrix`` holds the coefficients of T_p f_{i+1} in the basis
    f_1, ..., f_dim.  Polynomials are listed constant term first.
    """

    weight: int
    p: int
    matrix: tuple[tuple[int, ...], ...]
    charpoly: tuple[int, ...]
    charpoly_mod_p: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.matrix)


def apply_hecke(f: QSeries, k: int, p: int, upto: int) -> list:
    """Coefficients 1..upto of T_p f, using (T_p f)(n) = a(pn) + p^(k-1) a(n/p)."""
    if p * upto >= f.prec:
        raise PrecisionTooSmall(f"T_{p} through q^{upto} needs prec > {p * upto}, have {f.prec}")
    out = []
    for n in range(1, upto + 1):
        c = f.coefficient(p * n)
        if n % p == 0:
            c += p ** (k - 1) * f.coefficient(n // p)
        out.append(c)
    return out


@lru_cache(maxsize=None)
def hecke_matrix(k: int, p: int, prec: Optional[int] = None) -> HeckeData:
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    dim_m, dim_s = dimensions(k)
    need = p * dim_s + 1
    if prec is None:
        prec = need
    if prec < need:
        raise PrecisionTooSmall(f"T_{p} on S_{k} needs prec >= {need}, got {prec}")
    space = miller_basis(k, max(prec, dim_m))
    rows = []
    for f in space.cusp_basis:
        row = apply_hecke(f, k, p, dim_s)
        assert all(type(c) is int for c in row)
        rows.append(tuple(row))
    poly = charpoly(rows)
    return HeckeData(k, p, tuple(rows), poly, tuple(c % p for c in poly))


def is_nonordinary_space(k: int, p: int) -> tuple[bool, HeckeData]:
    """Whether charpoly(T_p | S_k) = x^dim mod p, i.e. every eigenvalue vanishes mod p."""
    if dimensions(k)[1] < 1:
        raise EmptyCuspSpace(f"S_{k} is zero")
    data = hecke_matrix(k, p)
    return not any(data.charpoly_mod_p[:-1]), data


def eigenform(k: int, prec: int) -> QSeries:
    """The normalized Hecke eigenform of weight k when dim S_k = 1."""
    dim_m, dim_s = dimensions(k)
    if dim_s != 1:
        raise DimensionNotOne(f"dim S_{k} = {dim_s}")
    return miller_basis(k, max(prec, dim_m)).basis[1].truncate(prec)


def prime_power_eigenvalue_congruence(f: QSeries, k: int, p: int, m: int) -> bool:
    """Check a(p)a(p^i) = a(p^(i+1)) + p^(k-1)a(p^(i-1)) for 1 <= i <= m, and a(p^m) = a(p)^m mod p."""
    if m < 1:
        raise ValueError("m must be positive")
    if f.prec <= p ** (m + 1):
        raise PrecisionTooSmall(f"need coefficients through q^{p ** (m + 1)}, have O(q^{f.prec})")
    a = [f.coefficient(p**i) for i in range(m + 2)]
    recursion = all(a[1] * a[i] == a[i + 1] + p ** (k - 1) * a[i - 1] for i in range(1, m + 1))
    return recursion and (a[m] - a[1] ** m) % p == 0
