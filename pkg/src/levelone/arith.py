"""Small integer helpers shared by the series constructors."""

from math import isqrt


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def divisor_sigma(n: int, power: int) -> int:
    """Sum of ``d**power`` over the positive divisors ``d`` of ``n`` (trial division)."""
    total = 0
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            total += d**power
            e = n // d
            if e != d:
                total += e**power
    return total
