"""
Finite materializations of the lattice graph on ``Z^P`` whose vertices ``k`` and ``l``
are adjacent when the blocks with ``k_A != l_A + 1`` have submeasure below ``ε``.

The relation is symmetrized (an edge in either orientation suffices).  Induced
boxes ``{0..B-1}^P`` bound the chromatic number from below and quotients
``(Z/m)^P`` from above.
"""

from __future__ import annotations

from fractions import Fraction
import functools
import itertools
import logging
from typing import (
    Callable,
    FrozenSet,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import attr

from .coloring import ColoringResult, FiniteGraph, chromatic_number as _chromatic_number
from .exception import InvalidInput, InvalidPartition, ResourceLimitExceeded, Uncolorable
from .logging import BraceStyleAdapter
from .submeasure import (
    FiniteSubmeasure,
    Partition,
    induced_submeasure,
    maximal_admissible_sets,
)
from .types import ColoringMode, GraphProvenance, Rational
from .utils import atoms_of

__all__ = (
    'GammaParams',
    'FiniteGraph',
    'RefinementReport',
    'uniform_params',
    'bad_set',
    'is_edge',
    'box_subgraph',
    'quotient_graph',
    'chromatic_number',
    'embed_diagonal',
    'diagonal_refinement_hom',
    'chi_profile',
)

log = BraceStyleAdapter(logging.getLogger(__name__))

Vector = Tuple[int, ...]


@attr.s(slots=True, frozen=True, cache_hash=True)
class GammaParams:
    mu: FiniteSubmeasure = attr.ib()
    partition: Partition = attr.ib()
    epsilon: Fraction = attr.ib(converter=Fraction)

    def __attrs_post_init__(self) -> None:
        if self.epsilon <= 0:
            raise InvalidInput(f'epsilon must be positive, got {self.epsilon}')
        if self.partition.atom_count != self.mu.atom_count:
            raise InvalidPartition(
                f'partition is over {self.partition.atom_count} atoms, '
                f'the submeasure over {self.mu.atom_count}')

    @property
    def dimension(self) -> int:
        return len(self.partition)

    def block_union_value(self, block_mask: int) -> Fraction:
        """μ of the union of the blocks selected by a block-index bitmask."""
        return _block_union_value(self, block_mask)

    def with_epsilon(self, epsilon: Rational) -> GammaParams:
        return GammaParams(self.mu, self.partition, epsilon)


@functools.lru_cache(maxsize=1 << 16)
def _block_union_value(params: GammaParams, block_mask: int) -> Fraction:
    atoms = params.partition.union_of(i for i in range(params.dimension) if block_mask >> i & 1)
    return params.mu.eval_mask(atoms)


def uniform_params(blocks: int, epsilon: Rational, atoms: int = None) -> GammaParams:
    """Total mass 1 spread uniformly over ``atoms`` atoms, split into consecutive blocks."""
    atoms = blocks if atoms is None else atoms
    mu = FiniteSubmeasure.uniform(atoms, Fraction(1, atoms))
    return GammaParams(mu, Partition.consecutive(atoms, blocks), epsilon)


def _check_vectors(params: GammaParams, k: Sequence[int], l: Sequence[int]) -> None:
    if len(k) != params.dimension or len(l) != params.dimension:
        raise InvalidInput(
            f'vectors must have length {params.dimension}, got {len(k)} and {len(l)}')


def _bad_blocks(k: Sequence[int], l: Sequence[int], m: int = None) -> int:
    mask = 0
    for i, (a, b) in enumerate(zip(k, l)):
        if m is None:
            ok = a == b + 1
        else:
            ok = (a - b - 1) % m == 0
        if not ok:
            mask |= 1 << i
    return mask


def bad_set(params: GammaParams, k: Sequence[int], l: Sequence[int]) -> FrozenSet[int]:
    """The atoms of the blocks ``A`` with ``k_A != l_A + 1``."""
    _check_vectors(params, k, l)
    blocks = _bad_blocks(k, l)
    return frozenset(atoms_of(params.partition.union_of(i for i in range(params.dimension) if blocks >> i & 1)))


def is_edge(params: GammaParams, k: Sequence[int], l: Sequence[int], *, modulus: int = None) -> bool:
    """
    Symmetrized adjacency; for ``k == l`` this reports a loop, which happens
    exactly when ``μ(X) < ε``.  With ``modulus`` the comparison is taken mod m.
    """
    _check_vectors(params, k, l)
    eps = params.epsilon
    return (params.block_union_value(_bad_blocks(k, l, modulus)) < eps
            or params.block_union_value(_bad_blocks(l, k, modulus)) < eps)


def _forced_block_sets(params: GammaParams) -> List[int]:
    """
    Minimal block sets ``G`` whose complement has submeasure below ``ε``.  ``k``
    and ``l`` are adjacent iff ``l_A = k_A - 1`` on some such ``G`` (or vice versa).
    """
    induced = induced_submeasure(params.mu, params.partition)
    full = (1 << params.dimension) - 1
    return [full & ~s for s in maximal_admissible_sets(induced, params.epsilon)]


def _index(vector: Sequence[int], side: int) -> int:
    idx = 0
    for x in vector:
        idx = idx * side + x
    return idx


def _materialize(params: GammaParams, side: int, cyclic: bool, max_vertices: int) -> FiniteGraph:
    p = params.dimension
    count = side ** p
    if count > max_vertices:
        raise ResourceLimitExceeded(
            f'{side}^{p} = {count} vertices exceeds the limit of {max_vertices}', max_vertices)
    vertices: List[Vector] = list(itertools.product(range(side), repeat=p))
    forced = _forced_block_sets(params)
    edges: Set[Tuple[int, int]] = set()
    loops: Set[int] = set()
    for ki, k in enumerate(vertices):
        for g in forced:
            choices: List[Sequence[int]] = []
            for a in range(p):
                if g >> a & 1:
                    target = k[a] - 1
                    if cyclic:
                        target %= side
                    elif target < 0:
                        break
                    choices.append((target,))
                else:
                    choices.append(range(side))
            else:
                for l in itertools.product(*choices):
                    li = _index(l, side)
                    if li == ki:
                        loops.add(ki)
                    else:
                        edges.add((min(ki, li), max(ki, li)))
    provenance = GraphProvenance.QUOTIENT if cyclic else GraphProvenance.BOX
    graph = FiniteGraph(vertices, edges, frozenset(loops), provenance, side)
    log.debug('materialized {}', graph.describe())
    return graph


def box_subgraph(params: GammaParams, B: int, *, max_vertices: int = 20000) -> FiniteGraph:
    """The induced subgraph on ``{0, ..., B-1}^P``."""
    if B < 2:
        raise InvalidInput(f'box size must be at least 2, got {B}')
    return _materialize(params, B, False, max_vertices)


def quotient_graph(params: GammaParams, m: int, *, max_vertices: int = 20000) -> FiniteGraph:
    """The graph on ``(Z/m)^P`` with the adjacency rule read mod ``m``."""
    if m < 2:
        raise InvalidInput(f'modulus must be at least 2, got {m}')
    return _materialize(params, m, True, max_vertices)


def chromatic_number(
    g: FiniteGraph,
    mode: ColoringMode = ColoringMode.EXACT,
    *,
    max_nodes: int = 5 * 10 ** 6,
) -> ColoringResult:
    return _chromatic_number(g, mode, max_nodes=max_nodes)


def embed_diagonal(coarse: Partition, fine: Partition, k: Sequence[int]) -> Vector:
    """``k'_{B} = k_{A}`` for the coarse block ``A`` containing the fine block ``B``."""
    parents = fine.parent_indices(coarse)
    return tuple(k[j] for j in parents)


class RefinementReport(NamedTuple):
    ok: bool
    checked_edges: int
    counterexample: Optional[Tuple[Vector, Vector]] = None


def diagonal_refinement_hom(
    coarse: GammaParams,
    fine: GammaParams,
    *,
    B: int = 3,
    max_vertices: int = 20000,
) -> RefinementReport:
    """
    Checks on the box ``{0..B-1}^{P0}`` that the diagonal embedding maps every edge
    (and loop) of the coarse graph to an edge (or loop) of the fine graph.
    """
    if coarse.mu != fine.mu or coarse.epsilon != fine.epsilon:
        raise InvalidInput('both graphs must share the submeasure and epsilon')
    if not fine.partition.refines(coarse.partition):
        raise InvalidPartition('the fine partition does not refine the coarse partition')
    box = box_subgraph(coarse, B, max_vertices=max_vertices)
    checked = 0
    pairs: Iterator[Tuple[int, int]] = itertools.chain(
        box.sorted_edges(), ((v, v) for v in sorted(box.loops)))
    for u, v in pairs:
        k, l = box.vertices[u], box.vertices[v]
        k2 = embed_diagonal(coarse.partition, fine.partition, k)
        l2 = embed_diagonal(coarse.partition, fine.partition, l)
        checked += 1
        if not is_edge(fine, k2, l2):
            return RefinementReport(False, checked, (k, l))
    return RefinementReport(True, checked)


def chi_profile(
    params_factory: Callable[[Fraction], GammaParams],
    eps_grid: Sequence[Rational],
    B: int,
    *,
    max_nodes: int = 5 * 10 ** 6,
) -> List[Optional[int]]:
    """χ of the box of side ``B`` along a grid of ε values; ``None`` marks a looped graph."""
    profile: List[Optional[int]] = []
    for eps in eps_grid:
        g = box_subgraph(params_factory(Fraction(eps)), B)
        try:
            profile.append(_chromatic_number(g, max_nodes=max_nodes).upper)
        except Uncolorable:
            profile.append(None)
    return profile
