"""
Reduced simplicial homology ranks.

Simplices are oriented by the canonical vertex order of the complex and the i-th
face carries the sign ``(-1)^i``.  The chain complex is augmented: ``∂_0`` sends
every vertex to the empty simplex, so all Betti numbers computed here are reduced.
"""

from __future__ import annotations

import logging
import math
from typing import (
    Dict,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import attr

from .complexes import Complex
from .exception import InvalidInput
from .logging import BraceStyleAdapter
from .types import CoefficientField
from .utils import is_prime

__all__ = (
    'ChainComplexData',
    'ConnectivityReport',
    'boundary_matrices',
    'rank',
    'betti',
    'check_connectivity_necessary',
    'compose_check',
    'euler_consistency',
    'DEFAULT_PRIME',
)

log = BraceStyleAdapter(logging.getLogger(__name__))

DEFAULT_PRIME = 2147483647

Column = Tuple[Tuple[int, int], ...]


@attr.s(slots=True, frozen=True)
class ChainComplexData:
    """
    ``simplices[d]`` lists the ``d``-simplices as sorted vertex-index tuples;
    ``boundaries[d]`` holds one sparse column ``((row, coeff), ...)`` per ``d``-simplex,
    rows indexing ``simplices[d - 1]`` (the single empty simplex for ``d = 0``).
    """

    vertex_count: int = attr.ib()
    simplices: Tuple[Tuple[Tuple[int, ...], ...], ...] = attr.ib()
    boundaries: Tuple[Tuple[Column, ...], ...] = attr.ib()

    @property
    def top_dimension(self) -> int:
        return len(self.simplices) - 1

    def chain_rank(self, d: int) -> int:
        """``dim C_d``, with ``C_{-1}`` spanned by the empty simplex."""
        if d == -1:
            return 1
        if 0 <= d < len(self.simplices):
            return len(self.simplices[d])
        return 0

    def dense(self, d: int) -> List[List[int]]:
        rows = self.chain_rank(d - 1)
        cols = self.boundaries[d] if 0 <= d < len(self.boundaries) else ()
        matrix = [[0] * len(cols) for _ in range(rows)]
        for j, col in enumerate(cols):
            for i, c in col:
                matrix[i][j] = c
        return matrix


def boundary_matrices(K: Complex, *, max_simplices: int = 2 * 10 ** 6) -> ChainComplexData:
    grouped = K.faces(max_faces=max_simplices)
    simplices: List[Tuple[Tuple[int, ...], ...]] = []
    for d in range(max(grouped, default=-1) + 1):
        simplices.append(tuple(tuple(K.index_of(v) for v in s) for s in grouped[d]))
    boundaries: List[Tuple[Column, ...]] = []
    for d, level in enumerate(simplices):
        if d == 0:
            boundaries.append(tuple(((0, 1),) for _ in level))
            continue
        row_of: Dict[Tuple[int, ...], int] = {s: i for i, s in enumerate(simplices[d - 1])}
        columns = []
        for s in level:
            col = sorted((row_of[s[:i] + s[i + 1:]], -1 if i % 2 else 1) for i in range(len(s)))
            columns.append(tuple(col))
        boundaries.append(tuple(columns))
    return ChainComplexData(len(K.vertices), tuple(simplices), tuple(boundaries))


def _rank_rational(columns: Iterable[Column]) -> int:
    """Fraction-free sparse elimination; pivots are the smallest row index of each reduced column."""
    pivots: Dict[int, Dict[int, int]] = {}
    for col in columns:
        v = dict(col)
        while v:
            piv = min(v)
            w = pivots.get(piv)
            if w is None:
                g = 0
                for x in v.values():
                    g = math.gcd(g, x)
                pivots[piv] = {k: x // g for k, x in v.items()}
                break
            a, b = v[piv], w[piv]
            merged: Dict[int, int] = {}
            for k in v.keys() | w.keys():
                x = b * v.get(k, 0) - a * w.get(k, 0)
                if x:
                    merged[k] = x
            g = 0
            for x in merged.values():
                g = math.gcd(g, x)
            v = {k: x // g for k, x in merged.items()} if g > 1 else merged
    return len(pivots)


def _rank_mod(columns: Iterable[Column], q: int) -> int:
    pivots: Dict[int, Dict[int, int]] = {}
    for col in columns:
        v = {k: x % q for k, x in col if x % q}
        while v:
            piv = min(v)
            w = pivots.get(piv)
            if w is None:
                inv = pow(v[piv], q - 2, q)
                pivots[piv] = {k: x * inv % q for k, x in v.items()}
                break
            a = v[piv]
            merged: Dict[int, int] = {}
            for k in v.keys() | w.keys():
                x = (v.get(k, 0) - a * w.get(k, 0)) % q
                if x:
                    merged[k] = x
            v = merged
    return len(pivots)


def rank(
    data: ChainComplexData,
    d: int,
    field: CoefficientField = CoefficientField.RATIONAL,
    modulus: int = DEFAULT_PRIME,
) -> int:
    """The rank of ``∂_d``; zero outside ``0..top_dimension``."""
    if not 0 <= d < len(data.boundaries):
        return 0
    if field == CoefficientField.PRIME:
        if not is_prime(modulus):
            raise InvalidInput(f'the coefficient modulus must be prime, got {modulus}')
        return _rank_mod(data.boundaries[d], modulus)
    return _rank_rational(data.boundaries[d])


def betti(
    K: Complex,
    up_to: int = None,
    *,
    field: CoefficientField = CoefficientField.RATIONAL,
    modulus: int = DEFAULT_PRIME,
    max_simplices: int = 2 * 10 ** 6,
    data: ChainComplexData = None,
) -> List[int]:
    """Reduced Betti numbers ``b̃_0 .. b̃_{up_to}`` (default: up to the dimension of ``K``)."""
    if data is None:
        data = boundary_matrices(K, max_simplices=max_simplices)
    if up_to is None:
        up_to = max(K.dimension, 0)
    if up_to < 0:
        raise InvalidInput('up_to must be nonnegative')
    ranks = [rank(data, d, field, modulus) for d in range(up_to + 2)]
    result = [data.chain_rank(d) - ranks[d] - ranks[d + 1] for d in range(up_to + 1)]
    log.debug('betti({}) = {}', K.name or 'complex', result)
    return result


class ConnectivityReport(NamedTuple):
    ok: bool
    betti: Tuple[int, ...]
    failing_dimension: Optional[int] = None
    label: str = 'necessary condition'


def check_connectivity_necessary(K: Complex, l: int, **kwargs) -> ConnectivityReport:
    """Vanishing of ``b̃_d`` for every ``d <= l``; necessary, not sufficient, for l-connectivity."""
    if l < 0:
        return ConnectivityReport(True, ())
    numbers = betti(K, l, **kwargs)
    for d, b in enumerate(numbers):
        if b:
            return ConnectivityReport(False, tuple(numbers), d)
    return ConnectivityReport(True, tuple(numbers))


def _apply(columns: Sequence[Column], vector: Column) -> Dict[int, int]:
    out: Dict[int, int] = {}
    for j, c in vector:
        for i, x in columns[j]:
            out[i] = out.get(i, 0) + c * x
    return {i: x for i, x in out.items() if x}


def compose_check(data: ChainComplexData) -> bool:
    """``∂_{d} ∘ ∂_{d+1} = 0`` for every ``d >= 0``."""
    for d in range(len(data.boundaries) - 1):
        lower = data.boundaries[d]
        for col in data.boundaries[d + 1]:
            if _apply(lower, col):
                return False
    return True


def euler_consistency(K: Complex, *, data: ChainComplexData = None, **kwargs) -> bool:
    """Alternating simplex counts agree with alternating reduced Betti numbers, from dimension -1."""
    if data is None:
        data = boundary_matrices(K)
    top = data.top_dimension
    counts = sum((-1) ** d * data.chain_rank(d) for d in range(-1, top + 1))
    b_minus_1 = 1 if top < 0 else 0
    numbers = betti(K, max(top, 0), data=data, **kwargs) if top >= 0 else []
    return counts == -b_minus_1 + sum((-1) ** d * b for d, b in enumerate(numbers))
