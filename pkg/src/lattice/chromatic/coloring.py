"""
Finite graphs and exact chromatic numbers.

The exact solver is a DSATUR branch-and-bound seeded with a maximum-clique lower
bound and a greedy upper bound.  Results never depend on set iteration order:
DSATUR ties are broken by degree and then by the vertex index.
"""

from __future__ import annotations

import logging
from typing import (
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import attr
import networkx as nx

from .exception import InvalidInput, ResourceLimitExceeded, Uncolorable
from .logging import BraceStyleAdapter
from .types import ColoringMode, GraphProvenance

__all__ = (
    'FiniteGraph',
    'ColoringResult',
    'chromatic_number',
    'canonical_coloring',
    'is_proper_coloring',
)

log = BraceStyleAdapter(logging.getLogger(__name__))


def _normalize_edges(edges: Iterable[Tuple[int, int]]) -> FrozenSet[Tuple[int, int]]:
    return frozenset((min(u, v), max(u, v)) for u, v in edges if u != v)


@attr.s(slots=True, frozen=True)
class FiniteGraph:
    """
    An undirected graph on ``vertices`` (kept in canonical order) with edges stored
    as index pairs ``(i, j)``, ``i < j``, and loops stored separately.
    """

    vertices: Tuple[Hashable, ...] = attr.ib(converter=tuple)
    edges: FrozenSet[Tuple[int, int]] = attr.ib(converter=_normalize_edges)
    loops: FrozenSet[int] = attr.ib(default=frozenset(), converter=frozenset)
    provenance: GraphProvenance = attr.ib(default=GraphProvenance.EXPLICIT)
    size_parameter: Optional[int] = attr.ib(default=None)

    def __attrs_post_init__(self) -> None:
        n = len(self.vertices)
        for u, v in self.edges:
            if not 0 <= u < v < n:
                raise InvalidInput(f'edge ({u}, {v}) refers to a missing vertex')
        if any(not 0 <= v < n for v in self.loops):
            raise InvalidInput('loop refers to a missing vertex')

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Tuple[int, int]], loops: Iterable[int] = ()) -> FiniteGraph:
        edges = list(edges)
        loops = set(loops) | {u for u, v in edges if u == v}
        return cls(tuple(range(vertex_count)), edges, frozenset(loops))

    @property
    def vertex_count(self) -> int:
        return len(self.vertices)

    @property
    def has_loops(self) -> bool:
        return bool(self.loops)

    def adjacency(self) -> List[Set[int]]:
        adj: List[Set[int]] = [set() for _ in self.vertices]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def sorted_edges(self) -> List[Tuple[int, int]]:
        return sorted(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.vertex_count))
        g.add_edges_from(self.edges)
        return g

    def describe(self) -> str:
        tag = self.provenance.value
        if self.size_parameter is not None:
            tag = f'{tag}({self.size_parameter})'
        return f'{tag}: {self.vertex_count} vertices, {len(self.edges)} edges, {len(self.loops)} loops'


class ColoringResult(NamedTuple):
    lower: int
    upper: int
    coloring: Tuple[int, ...]
    exact: bool

    @property
    def value(self) -> Optional[int]:
        return self.upper if self.exact else None


def is_proper_coloring(g: FiniteGraph, coloring: Sequence[int]) -> bool:
    if len(coloring) != g.vertex_count or g.has_loops:
        return False
    return all(coloring[u] != coloring[v] for u, v in g.edges)


def _clique_lower_bound(g: FiniteGraph) -> int:
    if g.vertex_count == 0:
        return 0
    if not g.edges:
        return 1
    clique, _ = nx.max_weight_clique(g.to_networkx(), weight=None)
    return len(clique)


def _greedy(g: FiniteGraph) -> Tuple[int, ...]:
    if g.vertex_count == 0:
        return ()
    colors = nx.greedy_color(g.to_networkx(), strategy='DSATUR')
    return _normalize(tuple(colors[v] for v in range(g.vertex_count)))


def _normalize(coloring: Sequence[int]) -> Tuple[int, ...]:
    """Relabel colours by order of first appearance in vertex order."""
    remap: Dict[int, int] = {}
    return tuple(remap.setdefault(c, len(remap)) for c in coloring)


def _dsatur_search(
    adj: List[Set[int]],
    lower: int,
    upper: int,
    initial: Tuple[int, ...],
    max_nodes: int,
) -> Tuple[int, Tuple[int, ...]]:
    """
    Returns the least number of colours and a colouring using that many, given a
    valid ``lower`` bound and an ``initial`` colouring with ``upper`` colours.
    """
    n = len(adj)
    degrees = [len(a) for a in adj]
    colors = [-1] * n
    # neighbor colour multiplicities per vertex
    seen: List[Dict[int, int]] = [{} for _ in range(n)]
    best = upper
    witness = initial
    nodes = 0

    def select() -> int:
        best_v, best_key = -1, (-1, -1)
        for v in range(n):
            if colors[v] >= 0:
                continue
            key = (len(seen[v]), degrees[v])
            if key > best_key:
                best_v, best_key = v, key
        return best_v

    def assign(v: int, c: int) -> None:
        colors[v] = c
        for w in adj[v]:
            seen[w][c] = seen[w].get(c, 0) + 1

    def unassign(v: int, c: int) -> None:
        colors[v] = -1
        for w in adj[v]:
            if seen[w][c] == 1:
                del seen[w][c]
            else:
                seen[w][c] -= 1

    def dfs(colored: int, used: int) -> bool:
        nonlocal best, witness, nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitExceeded(f'coloring search exceeded {max_nodes} nodes', max_nodes)
        if used >= best:
            return False
        if colored == n:
            best = used
            witness = tuple(colors)
            return best <= lower
        v = select()
        for c in range(min(used + 1, best - 1)):
            if c in seen[v]:
                continue
            assign(v, c)
            done = dfs(colored + 1, max(used, c + 1))
            unassign(v, c)
            if done:
                return True
        return False

    if lower < upper:
        dfs(0, 0)
    log.debug('dsatur: lower={} upper={} result={} nodes={}', lower, upper, best, nodes)
    return best, witness


def canonical_coloring(
    g: FiniteGraph,
    k: int,
    *,
    max_nodes: int = 5 * 10 ** 6,
    hint: Sequence[int] = None,
) -> Optional[Tuple[int, ...]]:
    """
    The lexicographically least proper colouring with colours ``0..k-1`` in vertex
    order, with colours numbered by first appearance; ``None`` if none exists.

    Every assignment is forward-checked against the later neighbours, so a branch
    dies as soon as some uncoloured vertex has all ``k`` colours blocked.  ``hint``
    is a known proper ``k``-colouring: if the node budget runs out, its normalized
    form is returned instead of raising :class:`ResourceLimitExceeded`.
    """
    n = g.vertex_count
    if g.has_loops:
        return None
    if hint is not None and (not is_proper_coloring(g, hint) or max(hint, default=-1) >= k):
        raise InvalidInput(f'hint is not a proper {k}-colouring')
    adj = g.adjacency()
    later = [[w for w in adj[v] if w > v] for v in range(n)]
    colors = [-1] * n
    # colours held by coloured neighbours, as a bitmask and as multiplicities
    blocked = [0] * n
    holders = [[0] * k for _ in range(n)]
    full = (1 << k) - 1
    nodes = 0

    def paint(v: int, c: int) -> bool:
        colors[v] = c
        alive = True
        for w in later[v]:
            holders[w][c] += 1
            blocked[w] |= 1 << c
            if blocked[w] == full:
                alive = False
        return alive

    def unpaint(v: int, c: int) -> None:
        colors[v] = -1
        for w in later[v]:
            holders[w][c] -= 1
            if not holders[w][c]:
                blocked[w] &= ~(1 << c)

    def dfs(v: int, used: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > max_nodes:
            raise ResourceLimitExceeded(f'coloring search exceeded {max_nodes} nodes', max_nodes)
        if v == n:
            return True
        for c in range(min(used + 1, k)):
            if blocked[v] >> c & 1:
                continue
            if paint(v, c) and dfs(v + 1, max(used, c + 1)):
                return True
            unpaint(v, c)
        return False

    try:
        found = dfs(0, 0)
    except ResourceLimitExceeded:
        if hint is None:
            raise
        log.info('canonical colouring search hit {} nodes; keeping the DSATUR colouring', max_nodes)
        return _normalize(hint)
    return tuple(colors) if found else None


def chromatic_number(
    g: FiniteGraph,
    mode: ColoringMode = ColoringMode.EXACT,
    *,
    max_nodes: int = 5 * 10 ** 6,
) -> ColoringResult:
    """
    Exact mode returns ``lower == upper == χ(g)`` together with the canonical witness
    (the normalized DSATUR colouring if the canonical search runs out of nodes);
    bounds mode returns the maximum-clique size and the greedy DSATUR colouring.
    """
    if g.has_loops:
        v = min(g.loops)
        raise Uncolorable(f'vertex {g.vertices[v]} carries a loop')
    lower = _clique_lower_bound(g)
    greedy = _greedy(g)
    upper = max(greedy, default=-1) + 1
    if mode == ColoringMode.BOUNDS:
        return ColoringResult(lower, upper, greedy, lower == upper)
    chi, found = _dsatur_search(g.adjacency(), lower, upper, greedy, max_nodes)
    witness = canonical_coloring(g, chi, max_nodes=max_nodes, hint=found)
    assert witness is not None
    return ColoringResult(chi, chi, witness, True)
