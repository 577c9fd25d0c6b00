"""
Finite submeasures on the power set of ``{1, ..., N}``, partitions of the atoms,
covering numbers and induced submeasures.

Atom sets travel as integer bitmasks internally (bit ``i - 1`` is atom ``i``)
and as sets of 1-based atom indices at the public boundary.
"""

from __future__ import annotations

from fractions import Fraction
import functools
import logging
import random
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import attr
import trafaret as t

from .exception import Infeasible, InvalidInput, InvalidPartition, ResourceLimitExceeded
from .logging import BraceStyleAdapter
from .types import AtomMask, FamilyKind, Rational, SubmeasureKind
from .utils import (
    atoms_of,
    full_mask,
    iter_submasks,
    mask_of,
    mask_sort_key,
    popcount,
)
from . import validators as tx

__all__ = (
    'FiniteSubmeasure',
    'Partition',
    'SubmeasureFamily',
    'AxiomReport',
    'CoverResult',
    'eval',
    'verify_axioms',
    'covering_number',
    'induced_submeasure',
    'common_refinement',
    'disjointify',
    'refine_below',
    'from_document',
    'to_document',
)

log = BraceStyleAdapter(logging.getLogger(__name__))

MAX_TABLE_ATOMS = 20


def _to_fraction_tuple(values: Iterable[Rational]) -> Tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


@attr.s(slots=True, frozen=True, cache_hash=True)
class FiniteSubmeasure:
    """
    A monotone subadditive set function on the subsets of ``atom_count`` atoms.

    ``weights`` holds the per-atom weights of the additive kinds (and the per-atom
    slope of the capped kind); ``table`` holds the explicit values of the table
    kind indexed by bitmask.
    """

    atom_count: int = attr.ib()
    kind: SubmeasureKind = attr.ib()
    weights: Tuple[Fraction, ...] = attr.ib(default=(), converter=_to_fraction_tuple)
    cap: Optional[Fraction] = attr.ib(default=None)
    table: Tuple[Fraction, ...] = attr.ib(default=(), converter=_to_fraction_tuple)

    def __attrs_post_init__(self) -> None:
        if self.atom_count < 1:
            raise InvalidInput(f'atom_count must be positive, got {self.atom_count}')
        if self.kind == SubmeasureKind.TABLE:
            if self.atom_count > MAX_TABLE_ATOMS:
                raise InvalidInput(f'table submeasures support at most {MAX_TABLE_ATOMS} atoms')
            if len(self.table) != 1 << self.atom_count:
                raise InvalidInput('table must list a value for every subset')
        elif len(self.weights) != self.atom_count:
            raise InvalidInput('one weight per atom is required')
        if any(w < 0 for w in self.weights) or any(v < 0 for v in self.table):
            raise InvalidInput('submeasure values must be nonnegative')
        if self.kind == SubmeasureKind.CAPPED and (self.cap is None or self.cap < 0):
            raise InvalidInput('capped submeasures need a nonnegative cap')

    @classmethod
    def uniform(cls, atom_count: int, weight: Rational) -> FiniteSubmeasure:
        return cls(atom_count, SubmeasureKind.UNIFORM, (Fraction(weight),) * atom_count)

    @classmethod
    def weighted(cls, weights: Sequence[Rational]) -> FiniteSubmeasure:
        return cls(len(weights), SubmeasureKind.WEIGHTED, weights)

    @classmethod
    def capped(
        cls,
        atom_count: int,
        cap: Rational,
        c: Rational = None,
        weights: Sequence[Rational] = None,
    ) -> FiniteSubmeasure:
        """``μ(A) = min(cap, Σ_{i∈A} c_i)`` with a uniform slope ``c`` or per-atom ``weights``."""
        if weights is None:
            if c is None:
                raise InvalidInput('capped submeasures need a slope c or weights')
            weights = (Fraction(c),) * atom_count
        return cls(atom_count, SubmeasureKind.CAPPED, weights, cap=Fraction(cap))

    @classmethod
    def from_table(cls, atom_count: int, values: Mapping[int, Rational]) -> FiniteSubmeasure:
        """Subsets missing from ``values`` (keyed by bitmask) evaluate to 0."""
        size = 1 << atom_count
        for mask in values:
            if not 0 <= mask < size:
                raise InvalidInput(f'bitmask {mask:#x} is out of range for {atom_count} atoms')
        table = [Fraction(values.get(mask, 0)) for mask in range(size)]
        return cls(atom_count, SubmeasureKind.TABLE, table=table)

    @property
    def ground(self) -> AtomMask:
        return full_mask(self.atom_count)

    def eval_mask(self, mask: int) -> Fraction:
        if mask >> self.atom_count:
            raise InvalidInput(f'atom set {set(atoms_of(mask))} exceeds {self.atom_count} atoms')
        return _mask_value(self, mask)

    def total(self) -> Fraction:
        return self.eval_mask(self.ground)

    def atom_values(self) -> Tuple[Fraction, ...]:
        return tuple(self.eval_mask(1 << i) for i in range(self.atom_count))

    def is_measure_kind(self) -> bool:
        return self.kind in (SubmeasureKind.UNIFORM, SubmeasureKind.WEIGHTED)


# memoised per (submeasure, mask)
@functools.lru_cache(maxsize=1 << 18)
def _mask_value(mu: FiniteSubmeasure, mask: int) -> Fraction:
    if mu.kind == SubmeasureKind.TABLE:
        return mu.table[mask]
    value = sum((mu.weights[a - 1] for a in atoms_of(mask)), Fraction(0))
    if mu.kind == SubmeasureKind.CAPPED:
        assert mu.cap is not None
        value = min(mu.cap, value)
    return value


def eval(mu: FiniteSubmeasure, atoms: Iterable[int]) -> Fraction:
    """Returns ``μ(S)`` for a set of 1-based atom indices."""
    atoms = tuple(atoms)
    for a in atoms:
        if not 1 <= a <= mu.atom_count:
            raise InvalidInput(f'atom index {a} is out of range 1..{mu.atom_count}')
    return mu.eval_mask(mask_of(atoms))


def _check_blocks(atom_count: int, blocks: Tuple[int, ...]) -> None:
    seen = 0
    for b in blocks:
        if b == 0:
            raise InvalidPartition('a partition must not contain an empty block')
        if b >> atom_count:
            raise InvalidPartition(f'block {sorted(atoms_of(b))} exceeds {atom_count} atoms')
        if seen & b:
            raise InvalidPartition('partition blocks must be pairwise disjoint')
        seen |= b
    if seen != full_mask(atom_count):
        missing = sorted(atoms_of(full_mask(atom_count) & ~seen))
        raise InvalidPartition(f'partition does not cover atoms {missing}')


@attr.s(slots=True, frozen=True)
class Partition:
    """An ordered list of nonempty, pairwise disjoint blocks covering ``{1..atom_count}``."""

    atom_count: int = attr.ib()
    blocks: Tuple[AtomMask, ...] = attr.ib(converter=tuple)

    def __attrs_post_init__(self) -> None:
        _check_blocks(self.atom_count, self.blocks)

    @classmethod
    def from_lists(cls, blocks: Iterable[Iterable[int]], atom_count: int = None) -> Partition:
        masks = []
        for block in blocks:
            atoms = tuple(block)
            if any(a < 1 for a in atoms):
                raise InvalidPartition('atom indices are 1-based')
            if len(set(atoms)) != len(atoms):
                raise InvalidPartition('duplicate atom inside a block')
            masks.append(mask_of(atoms))
        if atom_count is None:
            atom_count = max((max(atoms_of(m), default=0) for m in masks), default=0)
        return cls(atom_count, masks)

    @classmethod
    def singletons(cls, atom_count: int) -> Partition:
        return cls(atom_count, [AtomMask(1 << i) for i in range(atom_count)])

    @classmethod
    def consecutive(cls, atom_count: int, block_count: int) -> Partition:
        """Splits ``1..atom_count`` into ``block_count`` runs of near-equal length."""
        if not 1 <= block_count <= atom_count:
            raise InvalidPartition(f'cannot split {atom_count} atoms into {block_count} blocks')
        base, extra = divmod(atom_count, block_count)
        masks = []
        start = 1
        for i in range(block_count):
            size = base + (1 if i < extra else 0)
            masks.append(mask_of(range(start, start + size)))
            start += size
        return cls(atom_count, masks)

    def __len__(self) -> int:
        return len(self.blocks)

    def as_lists(self) -> List[List[int]]:
        return [list(atoms_of(b)) for b in self.blocks]

    def union_of(self, block_indices: Iterable[int]) -> AtomMask:
        """The atoms of the blocks with the given 0-based indices."""
        m = 0
        for i in block_indices:
            m |= self.blocks[i]
        return AtomMask(m)

    def refines(self, other: Partition) -> bool:
        """True iff every block of ``self`` lies inside a block of ``other``."""
        if self.atom_count != other.atom_count:
            return False
        return all(any(b & ~o == 0 for o in other.blocks) for b in self.blocks)

    def parent_indices(self, coarse: Partition) -> Tuple[int, ...]:
        """For each block of ``self``, the index of the block of ``coarse`` containing it."""
        parents = []
        for b in self.blocks:
            for j, o in enumerate(coarse.blocks):
                if b & ~o == 0:
                    parents.append(j)
                    break
            else:
                raise InvalidPartition('partition does not refine the coarse partition')
        return tuple(parents)


@attr.s(slots=True, frozen=True)
class SubmeasureFamily:
    """
    A resolution-indexed family ``r ↦ μ_r`` whose atoms have submeasure at most ``1/r``;
    the finite stand-in for a diffused submeasure.
    """

    kind: FamilyKind = attr.ib()
    params: Tuple[Fraction, ...] = attr.ib(default=(), converter=_to_fraction_tuple)

    @classmethod
    def uniform(cls) -> SubmeasureFamily:
        return cls(FamilyKind.UNIFORM)

    @classmethod
    def capped(cls, cap: Rational) -> SubmeasureFamily:
        return cls(FamilyKind.CAPPED, (Fraction(cap),))

    @classmethod
    def weighted(cls, pattern: Sequence[Rational]) -> SubmeasureFamily:
        if not pattern or any(Fraction(a) <= 0 for a in pattern):
            raise InvalidInput('the weight pattern must be a nonempty list of positive numbers')
        return cls(FamilyKind.WEIGHTED, tuple(pattern))

    def member(self, r: int) -> FiniteSubmeasure:
        if r < 1:
            raise InvalidInput(f'resolution must be positive, got {r}')
        mu: FiniteSubmeasure
        if self.kind == FamilyKind.UNIFORM:
            mu = FiniteSubmeasure.uniform(r, Fraction(1, r))
        elif self.kind == FamilyKind.CAPPED:
            mu = FiniteSubmeasure.capped(r, self.params[0], Fraction(1, r))
        else:
            total = sum(self.params, Fraction(0))
            weights = [a / (r * total) for _ in range(r) for a in self.params]
            mu = FiniteSubmeasure.weighted(weights)
        assert all(v <= Fraction(1, r) for v in mu.atom_values())
        return mu

    def describe(self) -> str:
        if not self.params:
            return self.kind.value
        return f"{self.kind.value}({','.join(str(p) for p in self.params)})"


class AxiomReport(NamedTuple):
    ok: bool
    counterexample: Optional[Tuple[FrozenSet[int], FrozenSet[int]]] = None
    reason: Optional[str] = None
    checked_pairs: int = 0


def _pair(a: int, b: int) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    return frozenset(atoms_of(a)), frozenset(atoms_of(b))


def verify_axioms(
    mu: FiniteSubmeasure,
    *,
    exhaustive_limit: int = 12,
    samples: int = 20000,
    seed: int = 0,
) -> AxiomReport:
    """
    Check ``μ(∅) = 0``, monotonicity and subadditivity.

    Up to ``exhaustive_limit`` atoms the check is exhaustive: monotonicity on all
    one-atom extensions and subadditivity on all disjoint pairs, which together
    imply both axioms on all pairs.  Larger ground sets are sampled with ``seed``.
    """
    if mu.eval_mask(0) != 0:
        return AxiomReport(False, _pair(0, 0), 'nonzero value on the empty set')
    n = mu.atom_count
    if n <= exhaustive_limit:
        values = [mu.eval_mask(m) for m in range(1 << n)]
        full = (1 << n) - 1
        checked = 0
        for a in range(1 << n):
            for i in range(n):
                bit = 1 << i
                if a & bit:
                    continue
                checked += 1
                if values[a] > values[a | bit]:
                    return AxiomReport(False, _pair(a, a | bit), 'monotonicity', checked)
        for a in range(1, 1 << n):
            va = values[a]
            for b in iter_submasks(full & ~a):
                if b <= a:
                    # each unordered pair once
                    continue
                checked += 1
                if values[a | b] > va + values[b]:
                    return AxiomReport(False, _pair(a, b), 'subadditivity', checked)
        return AxiomReport(True, checked_pairs=checked)
    rng = random.Random(seed)
    for i in range(samples):
        a = rng.getrandbits(n)
        b = rng.getrandbits(n)
        if mu.eval_mask(a) > mu.eval_mask(a | b):
            return AxiomReport(False, _pair(a, a | b), 'monotonicity', i + 1)
        if mu.eval_mask(a | b) > mu.eval_mask(a) + mu.eval_mask(b):
            return AxiomReport(False, _pair(a, b), 'subadditivity', i + 1)
    return AxiomReport(True, checked_pairs=samples)


class CoverResult(NamedTuple):
    k: int
    cover: Tuple[FrozenSet[int], ...]

    @property
    def masks(self) -> Tuple[AtomMask, ...]:
        return tuple(mask_of(s) for s in self.cover)


def maximal_admissible_sets(
    mu: FiniteSubmeasure,
    delta: Fraction,
    *,
    max_candidates: int = 200000,
) -> List[AtomMask]:
    """
    All inclusion-maximal sets ``A`` with ``μ(A) < δ``, in lexicographic order.
    Monotonicity lets the enumeration prune every non-admissible prefix.
    """
    n = mu.atom_count
    found: List[AtomMask] = []
    visited = 0

    def extend(mask: int, start: int) -> None:
        nonlocal visited
        visited += 1
        if visited > max_candidates:
            raise ResourceLimitExceeded(
                f'more than {max_candidates} admissible sets below {delta}', max_candidates)
        for a in range(start, n):
            bit = 1 << a
            if mu.eval_mask(mask | bit) < delta:
                extend(mask | bit, a + 1)
        for a in range(n):
            bit = 1 << a
            if not mask & bit and mu.eval_mask(mask | bit) < delta:
                return
        found.append(AtomMask(mask))

    extend(0, 0)
    found.sort(key=mask_sort_key)
    return found


def _greedy_cover(universe: int, candidates: Sequence[int]) -> List[int]:
    uncovered = universe
    chosen: List[int] = []
    while uncovered:
        best = max(candidates, key=lambda c: popcount(c & uncovered))
        chosen.append(best)
        uncovered &= ~best
    return chosen


def covering_number(
    mu: FiniteSubmeasure,
    delta: Rational,
    *,
    max_candidates: int = 200000,
    max_nodes: int = 5 * 10 ** 6,
) -> CoverResult:
    """
    The least number of sets of submeasure strictly below ``delta`` covering the
    ground set, with a witness cover made of maximal admissible sets.

    Greedy gives the initial upper bound; a depth-first branch-and-bound then
    branches on the uncovered atom with the fewest candidate sets, trying candidates
    in lexicographic order, so the returned witness is deterministic.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise InvalidInput('the covering threshold must be positive')
    for i, v in enumerate(mu.atom_values(), start=1):
        if v >= delta:
            raise Infeasible(f'atom {i} has submeasure {v} >= {delta}', atom=i)
    candidates = maximal_admissible_sets(mu, delta, max_candidates=max_candidates)
    universe = mu.ground
    # max() keeps the first maximum, i.e. the lexicographically smallest candidate.
    best = _greedy_cover(universe, candidates)
    largest = max(popcount(c) for c in candidates)
    by_atom: Dict[int, List[int]] = {
        a: [c for c in candidates if c >> a & 1] for a in range(mu.atom_count)
    }
    nodes = 0

    def search(uncovered: int, chosen: List[int]) -> None:
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitExceeded(f'set-cover search exceeded {max_nodes} nodes', max_nodes)
        if not uncovered:
            if len(chosen) < len(best):
                best = list(chosen)
            return
        remaining = popcount(uncovered)
        if len(chosen) + -(-remaining // largest) >= len(best):
            return
        pivot = min(
            (a for a in range(mu.atom_count) if uncovered >> a & 1),
            key=lambda a: len(by_atom[a]),
        )
        seen_parts = set()
        for c in by_atom[pivot]:
            part = c & uncovered
            if part in seen_parts:
                continue
            seen_parts.add(part)
            chosen.append(c)
            search(uncovered & ~c, chosen)
            chosen.pop()

    search(universe, [])
    log.debug('covering_number(delta={}): k={} candidates={} nodes={}',
              delta, len(best), len(candidates), nodes)
    cover = tuple(frozenset(atoms_of(c)) for c in best)
    return CoverResult(len(best), cover)


def induced_submeasure(mu: FiniteSubmeasure, partition: Partition) -> FiniteSubmeasure:
    """``μ_P(B) = μ(⋃_{i∈B} block_i)`` on ``len(P)`` atoms, keeping the kind where it can."""
    if partition.atom_count != mu.atom_count:
        raise InvalidPartition(
            f'partition is over {partition.atom_count} atoms, the submeasure over {mu.atom_count}')
    if mu.kind == SubmeasureKind.TABLE:
        m = len(partition)
        if m > MAX_TABLE_ATOMS:
            raise InvalidInput(f'table submeasures support at most {MAX_TABLE_ATOMS} atoms')
        values = {b: mu.eval_mask(partition.union_of(i for i in range(m) if b >> i & 1))
                  for b in range(1 << m)}
        return FiniteSubmeasure.from_table(m, values)
    block_weights = [
        sum((mu.weights[a - 1] for a in atoms_of(block)), Fraction(0))
        for block in partition.blocks
    ]
    if mu.kind == SubmeasureKind.CAPPED:
        assert mu.cap is not None
        return FiniteSubmeasure.capped(len(partition), mu.cap, weights=block_weights)
    if len(set(block_weights)) == 1:
        return FiniteSubmeasure.uniform(len(partition), block_weights[0])
    return FiniteSubmeasure.weighted(block_weights)


def common_refinement(partitions: Sequence[Partition]) -> Partition:
    """The coarsest common refinement; blocks ordered by their smallest atom."""
    if not partitions:
        raise InvalidPartition('at least one partition is required')
    atom_count = partitions[0].atom_count
    if any(p.atom_count != atom_count for p in partitions):
        raise InvalidPartition('partitions are over different ground sets')
    blocks: List[int] = list(partitions[0].blocks)
    for p in partitions[1:]:
        blocks = [b & o for b in blocks for o in p.blocks if b & o]
    blocks.sort(key=lambda b: b & -b)
    return Partition(atom_count, blocks)


def disjointify(cover: Sequence[int], atom_count: int) -> Partition:
    """Turn a cover into a partition: each set minus the union of its predecessors."""
    seen = 0
    blocks = []
    for c in cover:
        part = c & ~seen
        if part:
            blocks.append(part)
        seen |= c
    return Partition(atom_count, blocks)


def refine_below(mu: FiniteSubmeasure, partition: Partition, bound: Rational) -> Partition:
    """
    Split every block into consecutive runs of its atoms, each run grown greedily
    while its submeasure stays strictly below ``bound``.
    """
    bound = Fraction(bound)
    blocks: List[int] = []
    for block in partition.blocks:
        run = 0
        for a in atoms_of(block):
            bit = 1 << (a - 1)
            if mu.eval_mask(bit) >= bound:
                raise Infeasible(f'atom {a} has submeasure {mu.eval_mask(bit)} >= {bound}', atom=a)
            if mu.eval_mask(run | bit) < bound:
                run |= bit
            else:
                blocks.append(run)
                run = bit
        blocks.append(run)
    return Partition(partition.atom_count, blocks)


def from_document(data: Mapping[str, Any]) -> Tuple[FiniteSubmeasure, Optional[Partition]]:
    """Build a submeasure (and an optional partition) from a parsed doc file."""
    try:
        doc = tx.submeasure_file_iv.check(data)
    except t.DataError as e:
        raise InvalidInput(f'invalid submeasure doc: {e.as_dict()}')
    n = doc['atoms']
    kind = SubmeasureKind(doc['kind'])
    mu: FiniteSubmeasure
    try:
        if kind == SubmeasureKind.UNIFORM:
            mu = FiniteSubmeasure.uniform(n, doc.get('weight', Fraction(1, n)))
        elif kind == SubmeasureKind.WEIGHTED:
            mu = FiniteSubmeasure.weighted(doc['weights'])
        elif kind == SubmeasureKind.CAPPED:
            mu = FiniteSubmeasure.capped(n, doc['cap'], c=doc.get('c'), weights=doc.get('weights'))
        else:
            mu = FiniteSubmeasure.from_table(n, doc.get('values', {}))
    except KeyError as e:
        raise InvalidInput(f'the {kind.value} kind requires the {e.args[0]!r} field')
    if mu.atom_count != n:
        raise InvalidInput(f'"atoms" says {n} but {mu.atom_count} weights were given')
    partition = None
    if 'partition' in doc:
        partition = Partition.from_lists(doc['partition'], n)
    return mu, partition


def to_document(mu: FiniteSubmeasure, partition: Partition = None) -> Dict[str, Any]:
    doc: Dict[str, Any] = {'atoms': mu.atom_count, 'kind': mu.kind.value}
    if mu.kind == SubmeasureKind.UNIFORM:
        doc['weight'] = mu.weights[0]
    elif mu.kind == SubmeasureKind.WEIGHTED:
        doc['weights'] = list(mu.weights)
    elif mu.kind == SubmeasureKind.CAPPED:
        doc['cap'] = mu.cap
        doc['weights'] = list(mu.weights)
    else:
        doc['values'] = {f'{m:x}': v for m, v in enumerate(mu.table) if v}
    if partition is not None:
        doc['partition'] = partition.as_lists()
    return doc
