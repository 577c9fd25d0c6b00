"""
Finite abstract simplicial complexes with a Z/p action by value shifts.

Complexes are stored by their facets.  The complexes built here from chains,
subdivisions, partial-function joins and joins thereof are flag complexes, for
which a vertex set is a simplex iff it is pairwise so; membership in those is
tested through the edge set.

Vertices are hashable payloads: :class:`PartialFn`, frozensets of vertices (the
vertices of a subdivision), :class:`Tagged` (the two sides of a join), plain
integers or strings.  :func:`vertex_key` orders them canonically.
"""

from __future__ import annotations

import functools
import itertools
import logging
from typing import (
    Any,
    Dict,
    FrozenSet,
    Hashable,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import attr
import networkx as nx

from .exception import (
    InvalidInput,
    MissingAction,
    NotSimplicial,
    ResourceLimitExceeded,
)
from .logging import BraceStyleAdapter
from .utils import is_prime

__all__ = (
    'PartialFn',
    'Tagged',
    'Complex',
    'SimplicialMap',
    'SimplicialReport',
    'EquivarianceReport',
    'ActionReport',
    'vertex_key',
    'component_intervals',
    'in_V',
    'build_K',
    'build_S',
    'join',
    'barycentric',
    'sd_map',
    'map_s',
    's_map',
    'compose',
    'identity_map',
    'inclusion',
    'inclusion_S_into_K',
    'compose_tower',
    'verify_simplicial',
    'verify_equivariant',
    'verify_action',
    'reduced_euler_characteristic',
    'format_vertex',
    'parse_vertex',
    'dump_facets',
    'load_facets',
)

log = BraceStyleAdapter(logging.getLogger(__name__))

Vertex = Hashable
Simplex = FrozenSet[Vertex]


def _sorted_entries(entries: Iterable[Tuple[int, int]]) -> Tuple[Tuple[int, int], ...]:
    return tuple(sorted((int(i), int(v)) for i, v in entries))


@attr.s(slots=True, frozen=True)
class PartialFn:
    """A nonempty partial function ``{1..n} ⇀ Z/p`` stored as sorted ``(position, value)`` pairs."""

    n: int = attr.ib()
    entries: Tuple[Tuple[int, int], ...] = attr.ib(converter=_sorted_entries)

    def __attrs_post_init__(self) -> None:
        if not self.entries:
            raise InvalidInput('a partial function needs a nonempty domain')
        positions = [i for i, _ in self.entries]
        if len(set(positions)) != len(positions):
            raise InvalidInput(f'position repeated in {self.entries}')
        if positions[0] < 1 or positions[-1] > self.n:
            raise InvalidInput(f'domain {positions} is not inside 1..{self.n}')
        if any(v < 0 for _, v in self.entries):
            raise InvalidInput('values must be residues')

    @classmethod
    def from_mapping(cls, n: int, mapping: Mapping[int, int]) -> PartialFn:
        return cls(n, mapping.items())

    @property
    def dom(self) -> Tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    @property
    def values(self) -> Tuple[int, ...]:
        return tuple(v for _, v in self.entries)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def without(self, position: int) -> PartialFn:
        return PartialFn(self.n, [e for e in self.entries if e[0] != position])

    def extended(self, position: int, value: int, n: int = None) -> PartialFn:
        return PartialFn(self.n if n is None else n, self.entries + ((position, value),))

    def shift(self, q: int, p: int) -> PartialFn:
        return PartialFn(self.n, [(i, (v + q) % p) for i, v in self.entries])

    def is_subfunction_of(self, other: PartialFn) -> bool:
        return self.n == other.n and set(self.entries) <= set(other.entries)

    def compatible_with(self, other: PartialFn) -> bool:
        """True iff the union of both graphs is again a function."""
        mine = self.as_dict()
        return all(mine.get(i, v) == v for i, v in other.entries)

    def __str__(self) -> str:
        return format_vertex(self)


@attr.s(slots=True, frozen=True)
class Tagged:
    """A vertex of a join, tagged with the side (``'L'`` or ``'R'``) it comes from."""

    side: str = attr.ib(validator=attr.validators.in_(('L', 'R')))
    payload: Vertex = attr.ib()


@functools.lru_cache(maxsize=None)
def vertex_key(v: Vertex) -> Tuple[Any, ...]:
    """Canonical order: partial functions by ``(|dom|, dom, values)``, chains by size then members."""
    if isinstance(v, PartialFn):
        return (0, len(v.entries), v.dom, v.values)
    if isinstance(v, bool):
        raise InvalidInput('booleans are not vertices')
    if isinstance(v, int):
        return (1, v)
    if isinstance(v, str):
        return (2, v)
    if isinstance(v, Tagged):
        return (3, v.side, vertex_key(v.payload))
    if isinstance(v, frozenset):
        return (4, len(v), tuple(sorted(vertex_key(w) for w in v)))
    raise InvalidInput(f'unsupported vertex payload {v!r}')


def sort_vertices(vertices: Iterable[Vertex]) -> List[Vertex]:
    return sorted(vertices, key=vertex_key)


def shift_vertex(v: Vertex, q: int, p: int) -> Vertex:
    """The value-shift action, carried through chains and join tags."""
    if isinstance(v, PartialFn):
        return v.shift(q, p)
    if isinstance(v, frozenset):
        return frozenset(shift_vertex(w, q, p) for w in v)
    if isinstance(v, Tagged):
        return Tagged(v.side, shift_vertex(v.payload, q, p))
    raise MissingAction(f'vertex {format_vertex(v)} carries no Z/{p} action')


def _shift_action(vertices: Sequence[Vertex], index: Mapping[Vertex, int], p: int) -> Tuple[Tuple[int, ...], ...]:
    table = []
    for q in range(p):
        row = []
        for v in vertices:
            image = shift_vertex(v, q, p)
            try:
                row.append(index[image])
            except KeyError:
                raise MissingAction(f'the shift by {q} moves {format_vertex(v)} outside the complex')
        table.append(tuple(row))
    return tuple(table)


@attr.s(slots=True, frozen=True)
class Complex:
    """
    A simplicial complex given by its facets over a canonically ordered vertex list.

    ``action[q][i]`` is the index of ``q · vertices[i]``; it is present iff ``p`` is.
    The complex ``{∅}`` has no vertices and the single empty facet.
    """

    vertices: Tuple[Vertex, ...] = attr.ib(converter=tuple)
    facets: FrozenSet[Simplex] = attr.ib(converter=frozenset)
    p: Optional[int] = attr.ib(default=None)
    action: Optional[Tuple[Tuple[int, ...], ...]] = attr.ib(default=None, eq=False, repr=False)
    flag: bool = attr.ib(default=False, eq=False)
    name: str = attr.ib(default='', eq=False)
    _index: Dict[Vertex, int] = attr.ib(factory=dict, init=False, eq=False, repr=False)
    _edges: Set[Tuple[int, int]] = attr.ib(factory=set, init=False, eq=False, repr=False)
    _by_vertex: Dict[int, List[Simplex]] = attr.ib(factory=dict, init=False, eq=False, repr=False)

    def __attrs_post_init__(self) -> None:
        for i, v in enumerate(self.vertices):
            self._index[v] = i
        if len(self._index) != len(self.vertices):
            raise InvalidInput('duplicate vertex')
        if not self.facets:
            raise InvalidInput('a complex needs at least the empty simplex')
        for facet in self.facets:
            idx = []
            for v in facet:
                if v not in self._index:
                    raise InvalidInput(f'facet vertex {format_vertex(v)} is not a vertex of the complex')
                idx.append(self._index[v])
            for i in idx:
                self._by_vertex.setdefault(i, []).append(facet)
            if self.flag:
                for a, b in itertools.combinations(sorted(idx), 2):
                    self._edges.add((a, b))
        if self.p is not None and self.action is None:
            object.__setattr__(self, 'action', _shift_action(self.vertices, self._index, self.p))

    @classmethod
    def from_facets(
        cls,
        facets: Iterable[Iterable[Vertex]],
        *,
        p: int = None,
        flag: bool = False,
        name: str = '',
    ) -> Complex:
        """Builds a complex from any generating family; non-maximal members are dropped."""
        sets = {frozenset(f) for f in facets}
        maximal = [f for f in sets if not any(f < g for g in sets)]
        if not maximal:
            maximal = [frozenset()]
        vertices = sort_vertices(set().union(*maximal))
        return cls(vertices, maximal, p, flag=flag, name=name)

    @classmethod
    def empty(cls) -> Complex:
        return cls((), [frozenset()])

    @classmethod
    def points(cls, labels: Iterable[Vertex], *, p: int = None) -> Complex:
        labels = sort_vertices(labels)
        return cls(labels, [frozenset([v]) for v in labels] or [frozenset()], p, flag=True)

    def index_of(self, v: Vertex) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise InvalidInput(f'{format_vertex(v)} is not a vertex of {self.name or "the complex"}')

    def has_vertex(self, v: Vertex) -> bool:
        return v in self._index

    @property
    def dimension(self) -> int:
        return max(len(f) for f in self.facets) - 1

    def is_empty(self) -> bool:
        return not self.vertices

    def contains(self, simplex: Iterable[Vertex]) -> bool:
        simplex = frozenset(simplex)
        if not simplex:
            return True
        try:
            idx = sorted(self._index[v] for v in simplex)
        except KeyError:
            return False
        if self.flag:
            return all(pair in self._edges for pair in itertools.combinations(idx, 2))
        return any(simplex <= f for f in self._by_vertex.get(idx[0], ()))

    def sorted_facets(self) -> List[Tuple[Vertex, ...]]:
        rows = [tuple(sort_vertices(f)) for f in self.facets]
        rows.sort(key=lambda row: (len(row), tuple(vertex_key(v) for v in row)))
        return rows

    def faces(self, *, max_faces: int = None) -> Dict[int, List[Tuple[Vertex, ...]]]:
        """
        All nonempty simplices grouped by dimension, each as a vertex tuple in canonical
        order, the lists sorted by vertex indices.
        """
        seen: Set[Tuple[int, ...]] = set()
        for facet in self.facets:
            idx = sorted(self._index[v] for v in facet)
            for size in range(1, len(idx) + 1):
                for sub in itertools.combinations(idx, size):
                    seen.add(sub)
                    if max_faces is not None and len(seen) > max_faces:
                        raise ResourceLimitExceeded(
                            f'{self.name or "complex"} has more than {max_faces} simplices', max_faces)
        grouped: Dict[int, List[Tuple[Vertex, ...]]] = {}
        for sub in sorted(seen, key=lambda s: (len(s), s)):
            grouped.setdefault(len(sub) - 1, []).append(tuple(self.vertices[i] for i in sub))
        return grouped

    def face_counts(self, *, max_faces: int = None) -> List[int]:
        grouped = self.faces(max_faces=max_faces)
        top = max(grouped, default=-1)
        return [len(grouped.get(d, ())) for d in range(top + 1)]

    def act(self, q: int, v: Vertex) -> Vertex:
        if self.action is None or self.p is None:
            raise MissingAction(f'{self.name or "the complex"} carries no action')
        return self.vertices[self.action[q % self.p][self.index_of(v)]]

    def describe(self) -> str:
        action = f', Z/{self.p} action' if self.p is not None else ''
        return (f'{self.name or "complex"}: {len(self.vertices)} vertices, '
                f'{len(self.facets)} facets, dimension {self.dimension}{action}')


@attr.s(slots=True, frozen=True)
class SimplicialMap:
    """A vertex map ``source → target``; ``assignment[i]`` indexes ``target.vertices``."""

    source: Complex = attr.ib()
    target: Complex = attr.ib()
    assignment: Tuple[int, ...] = attr.ib(converter=tuple)
    name: str = attr.ib(default='', eq=False)

    def __attrs_post_init__(self) -> None:
        if len(self.assignment) != len(self.source.vertices):
            raise InvalidInput('the assignment must cover every source vertex')

    @classmethod
    def from_function(cls, source: Complex, target: Complex, fn: Any, name: str = '') -> SimplicialMap:
        return cls(source, target, [target.index_of(fn(v)) for v in source.vertices], name)

    def image(self, v: Vertex) -> Vertex:
        return self.target.vertices[self.assignment[self.source.index_of(v)]]

    def image_of(self, simplex: Iterable[Vertex]) -> Simplex:
        return frozenset(self.image(v) for v in simplex)

    def is_injective(self) -> bool:
        return len(set(self.assignment)) == len(self.assignment)


# -- partial functions and the chain complexes K, S --

def component_intervals(f: PartialFn) -> Tuple[int, int]:
    """
    ``(count, last_value)``: the number of value runs along the domain in increasing
    order, and the value at the largest point of the domain.
    """
    if not f.entries:
        raise InvalidInput('empty domain')
    values = f.values
    count = 1 + sum(1 for a, b in zip(values, values[1:]) if a != b)
    return count, values[-1]


def in_V(f: PartialFn, n: int, l: int, p: int) -> bool:
    """Membership in the vertex set of ``K^{n,l}_p``."""
    if f.n != n or any(v >= p for v in f.values):
        return False
    count, _ = component_intervals(f)
    return n - len(f) <= l and count <= l


def _check_params(n: int, l: int, p: int) -> None:
    if not is_prime(p):
        raise InvalidInput(f'p must be prime, got {p}')
    if n < 1:
        raise InvalidInput(f'n must be positive, got {n}')
    if l < 0 or n < l:
        raise InvalidInput(f'need n >= l >= 0, got n={n}, l={l}')


def _saturated_chains(top: PartialFn, floor: int) -> Iterator[Tuple[PartialFn, ...]]:
    """Chains ``top ⊃ … ⊃ bottom`` removing one point per step down to ``|dom| = floor``."""
    if len(top) == floor:
        yield (top,)
        return
    for i in top.dom:
        for rest in _saturated_chains(top.without(i), floor):
            yield rest + (top,)


def build_K(n: int, l: int, p: int) -> Complex:
    """
    The order complex of the partial functions ``f: {1..n} ⇀ Z/p`` with
    ``n - |dom f| <= l`` and at most ``l`` component intervals.
    """
    _check_params(n, l, p)
    floor = max(1, n - l)
    vertices: List[PartialFn] = []
    for size in range(floor, n + 1):
        for dom in itertools.combinations(range(1, n + 1), size):
            for values in itertools.product(range(p), repeat=size):
                f = PartialFn(n, zip(dom, values))
                if in_V(f, n, l, p):
                    vertices.append(f)
    # Restrictions never add runs, so the vertex set is convex under inclusion and
    # the maximal chains are the saturated chains from full functions down to |dom| = floor.
    facets: List[Simplex] = []
    for top in vertices:
        if len(top) == n:
            facets.extend(frozenset(chain) for chain in _saturated_chains(top, floor))
    if not vertices:
        facets = [frozenset()]
    complex_ = Complex(sort_vertices(vertices), facets, p, flag=True, name=f'K^{{{n},{l}}}_{p}')
    log.debug('built {}', complex_.describe())
    return complex_


def build_S(l_plus_1: int, p: int) -> Complex:
    """The join of ``l_plus_1`` copies of the ``p``-point set, on one-point partial functions."""
    if l_plus_1 < 1:
        raise InvalidInput(f'the number of join factors must be positive, got {l_plus_1}')
    if not is_prime(p):
        raise InvalidInput(f'p must be prime, got {p}')
    n = l_plus_1
    vertices = [PartialFn(n, [(i, v)]) for i in range(1, n + 1) for v in range(p)]
    facets = [
        frozenset(PartialFn(n, [(i, v)]) for i, v in zip(range(1, n + 1), values))
        for values in itertools.product(range(p), repeat=n)
    ]
    return Complex(sort_vertices(vertices), facets, p, flag=True, name=f'S^{n}_{p}')


def join(K: Complex, L: Complex, *, tagged: bool = True) -> Complex:
    """
    ``{F ∪ G : F ∈ K, G ∈ L}`` with the vertices tagged by side.  ``{∅}`` is the unit.
    The product action is attached when both sides act by the same ``p``.
    """
    if K.is_empty():
        return L
    if L.is_empty():
        return K
    if tagged:
        def left(v: Vertex) -> Vertex:
            return Tagged('L', v)

        def right(v: Vertex) -> Vertex:
            return Tagged('R', v)
    else:
        if set(K.vertices) & set(L.vertices):
            raise InvalidInput('the vertex sets of an untagged join must be disjoint')

        def left(v: Vertex) -> Vertex:
            return v

        right = left
    facets = [frozenset(map(left, F)) | frozenset(map(right, G)) for F in K.facets for G in L.facets]
    vertices = sort_vertices([left(v) for v in K.vertices] + [right(v) for v in L.vertices])
    p = K.p if K.p is not None and K.p == L.p else None
    name = f'({K.name or "K"} * {L.name or "L"})'
    return Complex(vertices, facets, p, flag=K.flag and L.flag, name=name)


def barycentric(K: Complex, *, max_vertices: int = 10 ** 6) -> Complex:
    """The order complex of the nonempty simplices of ``K``, with the action carried over."""
    if K.is_empty():
        return K
    grouped = K.faces(max_faces=max_vertices)
    total = sum(len(v) for v in grouped.values())
    if total > max_vertices:
        raise ResourceLimitExceeded(
            f'subdivision would have {total} vertices, above the limit of {max_vertices}', max_vertices)
    vertices = [frozenset(s) for d in sorted(grouped) for s in grouped[d]]
    facets: List[Simplex] = []
    for facet in K.facets:
        for order in itertools.permutations(sort_vertices(facet)):
            facets.append(frozenset(frozenset(order[:i]) for i in range(1, len(order) + 1)))
    result = Complex(sort_vertices(vertices), facets, K.p, flag=True, name=f'sd({K.name or "K"})')
    log.debug('built {}', result.describe())
    return result


# -- maps --

def identity_map(K: Complex) -> SimplicialMap:
    return SimplicialMap(K, K, range(len(K.vertices)), f'id[{K.name}]')


def inclusion(source: Complex, target: Complex) -> SimplicialMap:
    """The identity on vertices, which must all be vertices of ``target``."""
    return SimplicialMap.from_function(source, target, lambda v: v, f'{source.name} ⊆ {target.name}')


def _union(chain: Iterable[Vertex], n: int) -> PartialFn:
    entries: Dict[int, int] = {}
    for f in chain:
        assert isinstance(f, PartialFn)
        entries.update(f.entries)
    return PartialFn(n, entries.items())


def inclusion_S_into_K(l_plus_1: int, p: int, *, max_sd_vertices: int = 10 ** 6) -> SimplicialMap:
    """
    ``i: sd(S^{l+1}_p) → K^{l+1,l+1}_p`` sending a face of ``S`` to the partial function
    it spans.  The faces of ``S`` are exactly the nonempty partial functions on
    ``{1..l+1}``, so ``i`` is an equivariant isomorphism.  The vertex identity
    ``S → K`` itself is not simplicial once ``l + 1 >= 2``.
    """
    S = build_S(l_plus_1, p)
    source = barycentric(S, max_vertices=max_sd_vertices)
    target = build_K(l_plus_1, l_plus_1, p)
    return SimplicialMap.from_function(
        source, target, lambda face: _union(face, l_plus_1), f'i[{l_plus_1},{p}]')


def compose(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    """``g ∘ f``; the target of ``f`` must be the source of ``g``."""
    if f.target is not g.source and f.target != g.source:
        raise InvalidInput('cannot compose: the target of the first map is not the source of the second')
    return SimplicialMap(f.source, g.target, [g.assignment[j] for j in f.assignment], f'{g.name}∘{f.name}')


class SimplicialReport(NamedTuple):
    ok: bool
    checked: int
    counterexample: Optional[Tuple[Vertex, ...]] = None


def verify_simplicial(f: SimplicialMap) -> SimplicialReport:
    """Checks that every source facet maps onto a simplex of the target."""
    checked = 0
    for facet in f.source.sorted_facets():
        checked += 1
        if not f.target.contains(f.image_of(facet)):
            return SimplicialReport(False, checked, facet)
    return SimplicialReport(True, checked)


class EquivarianceReport(NamedTuple):
    ok: bool
    checked: int
    counterexample: Optional[Tuple[Vertex, int]] = None


def verify_equivariant(f: SimplicialMap, p: int = None) -> EquivarianceReport:
    """Checks ``f(q·v) = q·f(v)`` for every source vertex and every ``q`` in Z/p."""
    src, dst = f.source, f.target
    if src.action is None or dst.action is None:
        raise MissingAction('both complexes must carry a Z/p action')
    if src.p != dst.p or (p is not None and p != src.p):
        raise InvalidInput(f'the actions disagree on p ({src.p}, {dst.p}, {p})')
    assert src.p is not None
    checked = 0
    for i, v in enumerate(src.vertices):
        for q in range(src.p):
            checked += 1
            if f.assignment[src.action[q][i]] != dst.action[q][f.assignment[i]]:
                return EquivarianceReport(False, checked, (v, q))
    return EquivarianceReport(True, checked)


class ActionReport(NamedTuple):
    ok: bool
    reason: Optional[str] = None


def verify_action(K: Complex) -> ActionReport:
    """The action is a homomorphism Z/p → Aut(K): 0 acts trivially, ``q`` permutes facets."""
    if K.action is None or K.p is None:
        raise MissingAction(f'{K.name or "the complex"} carries no action')
    n = len(K.vertices)
    if K.action[0] != tuple(range(n)):
        return ActionReport(False, '0 does not act as the identity')
    gen = K.action[1 % K.p]
    for q in range(K.p):
        row = K.action[q]
        if sorted(row) != list(range(n)):
            return ActionReport(False, f'{q} does not permute the vertices')
        if K.action[(q + 1) % K.p] != tuple(gen[row[i]] for i in range(n)):
            return ActionReport(False, f'acting by {q} then 1 differs from acting by {q + 1}')
        for facet in K.facets:
            image = frozenset(K.vertices[row[K.index_of(v)]] for v in facet)
            if image not in K.facets:
                return ActionReport(False, f'{q} does not map facets to facets')
    return ActionReport(True)


def sd_map(f: SimplicialMap, source: Complex = None, target: Complex = None) -> SimplicialMap:
    """``sd(f)`` sends the vertex ``F`` of ``sd(K)`` to the vertex ``f(F)`` of ``sd(L)``."""
    report = verify_simplicial(f)
    if not report.ok:
        raise NotSimplicial(f'{f.name or "map"} is not simplicial on {report.counterexample}')
    source = barycentric(f.source) if source is None else source
    target = barycentric(f.target) if target is None else target
    return SimplicialMap.from_function(source, target, f.image_of, f'sd({f.name})')


def map_s(chain: Iterable[PartialFn], n: int, l: int, p: int) -> PartialFn:
    """
    The top of a nontrivial chain; for a one-element chain ``{f}``, ``f`` extended
    by ``n + 1 ↦`` the value of its last component interval.  The result lies in
    ``K^{n+1,l}_p``.

    The rule commutes with the action.  Adjacent subdivision vertices ``{f}`` and
    ``{f, h}`` with ``f ⊊ h`` go to ``f ∪ {n+1 ↦ q}`` and ``h``, which are not
    comparable, so the induced vertex map is simplicial only when ``K^{n,l}_p``
    has no edges (``n = 1`` or ``l = 0``).
    """
    members = sorted(chain, key=vertex_key)
    if not members:
        raise InvalidInput('the chain is empty')
    for f in members:
        if not isinstance(f, PartialFn) or not in_V(f, n, l, p):
            raise InvalidInput(f'{format_vertex(f)} is not a vertex of K^{{{n},{l}}}_{p}')
    for a, b in zip(members, members[1:]):
        if not a.is_subfunction_of(b) or len(a) == len(b):
            raise InvalidInput(f'{format_vertex(a)} and {format_vertex(b)} do not form a chain')
    if len(members) == 1:
        f = members[0]
        _, q = component_intervals(f)
        return f.extended(n + 1, q, n + 1)
    top = members[-1]
    return PartialFn(n + 1, top.entries)


def s_map(n: int, l: int, p: int, *, source: Complex = None, target: Complex = None,
          max_sd_vertices: int = 10 ** 6) -> SimplicialMap:
    """The vertex map ``sd(K^{n,l}_p) → K^{n+1,l}_p`` of :func:`map_s`; run :func:`verify_simplicial` on it."""
    if source is None:
        source = barycentric(build_K(n, l, p), max_vertices=max_sd_vertices)
    if target is None:
        target = build_K(n + 1, l, p)
    return SimplicialMap.from_function(
        source, target, lambda chain: map_s(chain, n, l, p), f's[{n},{l},{p}]')


def compose_tower(l: int, p: int, l_n: int, *, max_sd_vertices: int = 10 ** 6) -> SimplicialMap:
    """
    The equivariant vertex map ``sd^{l_n+1}(S^{l+1}_p) → K^{l+1+l_n, l+1}_p``
    obtained from :func:`inclusion_S_into_K` by alternating subdivision and ``s``.
    Subdividing a level requires the level below to be simplicial, so for ``l >= 1``
    only ``l_n <= 1`` builds; the result is then reported by the verifiers.
    """
    if l < 0 or l_n < 0:
        raise InvalidInput('l and l_n must be nonnegative')
    width = l + 1
    phi = inclusion_S_into_K(width, p, max_sd_vertices=max_sd_vertices)
    for j in range(1, l_n + 1):
        src = barycentric(phi.source, max_vertices=max_sd_vertices)
        mid = barycentric(phi.target, max_vertices=max_sd_vertices)
        step = s_map(width + j - 1, width, p, source=mid, target=build_K(width + j, width, p))
        phi = compose(step, sd_map(phi, src, mid))
        log.debug('tower level {}: {} -> {}', j, phi.source.describe(), phi.target.describe())
    return phi


# -- invariants --

def reduced_euler_characteristic(K: Complex, *, max_faces: int = None) -> int:
    """``Σ_{d >= -1} (-1)^d f_d`` with the empty simplex counted in dimension -1."""
    counts = K.face_counts(max_faces=max_faces)
    return -1 + sum((-1) ** d * c for d, c in enumerate(counts))


# -- facet-list text format --

def format_vertex(v: Vertex) -> str:
    if isinstance(v, PartialFn):
        return f"{','.join(map(str, v.dom))}:{','.join(map(str, v.values))}"
    if isinstance(v, frozenset):
        return '[' + '|'.join(format_vertex(w) for w in sort_vertices(v)) + ']'
    if isinstance(v, Tagged):
        return f'{v.side}({format_vertex(v.payload)})'
    return str(v)


def _split_top_level(text: str, sep: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch in '[(':
            depth += 1
        elif ch in '])':
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def parse_vertex(text: str, n: int = None) -> Vertex:
    """Inverse of :func:`format_vertex`; ``n`` is the ambient size for partial functions."""
    text = text.strip()
    if not text:
        raise InvalidInput('empty vertex payload')
    if text.startswith('[') and text.endswith(']'):
        inner = text[1:-1]
        return frozenset(parse_vertex(part, n) for part in _split_top_level(inner, '|'))
    if text[:2] in ('L(', 'R(') and text.endswith(')'):
        return Tagged(text[0], parse_vertex(text[2:-1], n))
    if ':' in text:
        dom_text, _, val_text = text.partition(':')
        try:
            dom = [int(x) for x in dom_text.split(',')]
            vals = [int(x) for x in val_text.split(',')]
        except ValueError:
            raise InvalidInput(f'malformed partial function {text!r}')
        if len(dom) != len(vals):
            raise InvalidInput(f'domain and values differ in length in {text!r}')
        return PartialFn(max(dom) if n is None else n, zip(dom, vals))
    try:
        return int(text)
    except ValueError:
        return text


def dump_facets(K: Complex) -> str:
    """One facet per line, vertices separated by spaces; ``-`` marks the empty facet."""
    header = ['# facets']
    ns = {v.n for v in _partial_fns(K.vertices)}
    if len(ns) == 1:
        header.append(f'n={ns.pop()}')
    if K.p is not None:
        header.append(f'p={K.p}')
    lines = [' '.join(header)]
    for row in K.sorted_facets():
        lines.append(' '.join(format_vertex(v) for v in row) if row else '-')
    return '\n'.join(lines) + '\n'


def _partial_fns(vertices: Iterable[Vertex]) -> Iterator[PartialFn]:
    for v in vertices:
        if isinstance(v, PartialFn):
            yield v
        elif isinstance(v, frozenset):
            yield from _partial_fns(v)
        elif isinstance(v, Tagged):
            yield from _partial_fns([v.payload])


def load_facets(text: str, *, name: str = '') -> Complex:
    n: Optional[int] = None
    p: Optional[int] = None
    facets: List[Simplex] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith('#'):
            for token in line[1:].split():
                key, _, value = token.partition('=')
                if key == 'n' and value:
                    n = int(value)
                elif key == 'p' and value:
                    p = int(value)
            continue
        if line == '-':
            facets.append(frozenset())
        else:
            facets.append(frozenset(parse_vertex(tok, n) for tok in line.split()))
    loaded = Complex.from_facets(facets, name=name)
    flag = _is_flag(loaded)
    return Complex(loaded.vertices, loaded.facets, p, flag=flag, name=name)


def _is_flag(K: Complex) -> bool:
    """A complex is flag iff its facets are exactly the maximal cliques of its 1-skeleton."""
    g = nx.Graph()
    g.add_nodes_from(range(len(K.vertices)))
    for facet in K.facets:
        g.add_edges_from(itertools.combinations(sorted(K.index_of(v) for v in facet), 2))
    cliques = {frozenset(K.vertices[i] for i in c) for c in nx.find_cliques(g)} if K.vertices else {frozenset()}
    return cliques == set(K.facets)
