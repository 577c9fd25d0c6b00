'''
An extension module to Trafaret which provides additional type checkers
for the exact-arithmetic inputs of this package.
'''

from fractions import Fraction
import re
from typing import (
    Any,
    List,
    Tuple,
)

import trafaret as t

__all__ = (
    'Rational',
    'HexMask',
    'AtomIndexList',
    'PartitionBlocks',
    'submeasure_file_iv',
    'parse_rational',
)

_rx_rational = re.compile(r'^\s*(?P<num>[+-]?\d+)\s*(?:/\s*(?P<den>\d+)\s*)?$')


def parse_rational(value: Any) -> Fraction:
    '''
    Parse an exact rational written as ``"a/b"`` or an integer.
    Decimal notation is rejected to keep the exactness contract.
    '''
    if isinstance(value, bool):
        raise ValueError(f'{value!r} is not a rational number')
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f'{value!r} is not a rational number')
    match = _rx_rational.match(value)
    if match is None:
        raise ValueError(f'{value!r} is not a rational of the form a/b')
    den = int(match.group('den')) if match.group('den') is not None else 1
    if den == 0:
        raise ValueError(f'{value!r} has a zero denominator')
    return Fraction(int(match.group('num')), den)


class Rational(t.Trafaret):

    def __init__(self, *, positive: bool = False, nonnegative: bool = False) -> None:
        self.positive = positive
        self.nonnegative = nonnegative

    def check_and_return(self, value: Any) -> Fraction:
        try:
            q = parse_rational(value)
        except ValueError:
            self._failure('value is not an exact rational (use "a/b")', value=value)
        if self.positive and q <= 0:
            self._failure('value must be positive', value=value)
        if self.nonnegative and q < 0:
            self._failure('value must be nonnegative', value=value)
        return q


class HexMask(t.Trafaret):
    '''A subset of atoms keyed as a hexadecimal bitmask, e.g. ``"0x5"`` or ``"5"``.'''

    def check_and_return(self, value: Any) -> int:
        try:
            return int(str(value), 16)
        except ValueError:
            self._failure('value is not a hexadecimal bitmask', value=value)


class AtomIndexList(t.Trafaret):
    '''A list of distinct 1-based atom indices.'''

    def check_and_return(self, value: Any) -> Tuple[int, ...]:
        if not isinstance(value, (list, tuple)):
            self._failure('value is not a list of atom indices', value=value)
        atoms = []
        for item in value:
            if isinstance(item, bool) or not isinstance(item, int) or item < 1:
                self._failure('atom indices must be positive integers', value=value)
            atoms.append(item)
        if len(set(atoms)) != len(atoms):
            self._failure('atom indices must be distinct', value=value)
        return tuple(atoms)


class PartitionBlocks(t.Trafaret):
    '''A partition written as a list of lists of 1-based atom indices.'''

    def check_and_return(self, value: Any) -> List[Tuple[int, ...]]:
        if not isinstance(value, (list, tuple)) or not value:
            self._failure('value is not a nonempty list of blocks', value=value)
        iv = AtomIndexList()
        blocks = [iv.check(b) for b in value]
        if any(not b for b in blocks):
            self._failure('a partition must not have empty blocks', value=value)
        return blocks


submeasure_file_iv = t.Dict({
    t.Key('atoms'): t.Int[1:],
    t.Key('kind'): t.Enum('uniform', 'weighted', 'capped', 'table'),
    t.Key('weight', optional=True): Rational(nonnegative=True),
    t.Key('weights', optional=True): t.List(Rational(nonnegative=True)),
    t.Key('cap', optional=True): Rational(nonnegative=True),
    t.Key('c', optional=True): Rational(nonnegative=True),
    t.Key('values', optional=True): t.Mapping(HexMask(), Rational(nonnegative=True)),
    t.Key('partition', optional=True): PartitionBlocks(),
}).allow_extra('*')
