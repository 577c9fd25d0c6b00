from __future__ import annotations

from fractions import Fraction
import math
import sys
from typing import (
    Iterable,
    Iterator,
    Tuple,
)

from .types import AtomMask, Rational


def env_info() -> str:
    """
    Returns a string that contains the Python version and runtime path.
    """
    v = sys.version_info
    pyver = f'Python {v.major}.{v.minor}.{v.micro}'
    if v.releaselevel != 'final':
        pyver += f'{v.releaselevel[0]}{v.serial}'
    return f'{pyver} (env: {sys.prefix})'


# -- atom sets as bitmasks --

def mask_of(atoms: Iterable[int]) -> AtomMask:
    """
    Encode 1-based atom indices as a bitmask.

    >>> mask_of([1, 3])
    5
    """
    m = 0
    for a in atoms:
        m |= 1 << (a - 1)
    return AtomMask(m)


def atoms_of(mask: int) -> Tuple[int, ...]:
    """
    >>> atoms_of(5)
    (1, 3)
    """
    result = []
    i = 1
    while mask:
        if mask & 1:
            result.append(i)
        mask >>= 1
        i += 1
    return tuple(result)


def full_mask(n: int) -> AtomMask:
    return AtomMask((1 << n) - 1)


def popcount(mask: int) -> int:
    return bin(mask).count('1')


def iter_submasks(mask: int) -> Iterator[int]:
    """Iterates all submasks of ``mask`` including 0, in decreasing order."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def mask_sort_key(mask: int) -> Tuple[int, ...]:
    """Lexicographic order of the sorted atom tuples."""
    return atoms_of(mask)


# -- number theory --

def is_prime(n: int) -> bool:
    """Trial division; the arguments here stay small."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def primes_between(lo: int, hi: int) -> Iterator[int]:
    """Yields primes ``p`` with ``lo < p < hi`` in increasing order (sieve)."""
    if hi - lo < 2:
        return
    sieve = bytearray([1]) * hi
    sieve[0] = 0
    if hi > 1:
        sieve[1] = 0
    for i in range(2, math.isqrt(hi - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(sieve[i * i::i]))
    for q in range(lo + 1, hi):
        if sieve[q]:
            yield q


def floor_cbrt(q: Rational) -> int:
    """
    The largest integer ``m`` with ``m ** 3 <= q`` for a nonnegative rational ``q``.

    >>> floor_cbrt(Fraction(27, 4))
    1
    >>> floor_cbrt(8)
    2
    """
    q = Fraction(q)
    if q < 0:
        raise ValueError('negative argument')
    m = int(round(float(q) ** (1 / 3))) if q < 2 ** 900 else 0
    m = max(m, 0)
    while m ** 3 > q:
        m -= 1
    while (m + 1) ** 3 <= q:
        m += 1
    return m


def exact_cbrt(q: Rational) -> Fraction | None:
    """Returns the rational cube root of ``q`` if it exists."""
    q = Fraction(q)
    num, den = q.numerator, q.denominator
    a, b = floor_cbrt(num), floor_cbrt(den)
    if a ** 3 == num and b ** 3 == den:
        return Fraction(a, b)
    return None


def format_rational(x: Rational) -> str:
    """
    >>> format_rational(Fraction(3, 4))
    '3/4'
    >>> format_rational(2)
    '2'
    """
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f'{x.numerator}/{x.denominator}'
