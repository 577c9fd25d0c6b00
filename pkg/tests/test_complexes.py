import itertools

import pytest

from lattice.chromatic import complexes as cx
from lattice.chromatic.complexes import Complex, PartialFn, SimplicialMap, Tagged
from lattice.chromatic.exception import InvalidInput, MissingAction, NotSimplicial, ResourceLimitExceeded


def pf(n, mapping):
    return PartialFn.from_mapping(n, mapping)


def edge_count(K: Complex) -> int:
    counts = K.face_counts()
    return counts[1] if len(counts) > 1 else 0


def test_partial_fn_basics():
    f = pf(5, {4: 1, 1: 0, 2: 0})
    assert f.dom == (1, 2, 4)
    assert f.values == (0, 0, 1)
    assert len(f) == 3
    assert f.shift(1, 2) == pf(5, {1: 1, 2: 1, 4: 0})
    assert f.without(4) == pf(5, {1: 0, 2: 0})
    assert f.without(4).is_subfunction_of(f)
    assert not f.is_subfunction_of(f.without(4))
    assert f.compatible_with(pf(5, {2: 0, 3: 1}))
    assert not f.compatible_with(pf(5, {2: 1}))
    assert str(f) == '1,2,4:0,0,1'
    with pytest.raises(InvalidInput):
        pf(3, {})
    with pytest.raises(InvalidInput):
        pf(3, {4: 0})


def test_component_intervals():
    assert cx.component_intervals(pf(3, {1: 1, 2: 1, 3: 1})) == (1, 1)
    assert cx.component_intervals(pf(5, {1: 0, 2: 0, 4: 1})) == (2, 1)
    assert cx.component_intervals(pf(4, {1: 0, 3: 0})) == (1, 0)


def test_in_V():
    assert cx.in_V(pf(3, {1: 0, 2: 0}), 3, 1, 2)
    assert not cx.in_V(pf(3, {1: 0}), 3, 1, 2)
    assert not cx.in_V(pf(3, {1: 0, 2: 1, 3: 0}), 3, 1, 2)
    assert not cx.in_V(pf(3, {1: 2, 2: 2}), 3, 1, 2)


@pytest.mark.parametrize('n, l, p, vertices', [
    (3, 1, 2, 8),
    (1, 1, 2, 2),
    (2, 2, 3, 15),
])
def test_build_K_vertex_counts(n, l, p, vertices):
    K = cx.build_K(n, l, p)
    assert len(K.vertices) == vertices
    assert all(cx.in_V(v, n, l, p) for v in K.vertices)


def test_build_K_matches_order_complex():
    n, l, p = 3, 2, 2
    K = cx.build_K(n, l, p)
    # every chain of the poset is a simplex, and nothing else
    for a, b in itertools.combinations(K.vertices, 2):
        comparable = a.is_subfunction_of(b) or b.is_subfunction_of(a)
        assert K.contains([a, b]) == comparable
    assert cx.verify_action(K).ok
    assert K.dimension == 2


def test_build_K_rejects_bad_parameters():
    with pytest.raises(InvalidInput):
        cx.build_K(3, 1, 4)
    with pytest.raises(InvalidInput):
        cx.build_K(2, 3, 2)


def test_build_S():
    three_points = cx.build_S(1, 3)
    assert len(three_points.vertices) == 3
    assert three_points.dimension == 0
    square = cx.build_S(2, 2)
    assert len(square.vertices) == 4
    assert len(square.facets) == 4
    assert square.dimension == 1
    bipartite = cx.build_S(2, 3)
    assert len(bipartite.facets) == 9
    assert cx.verify_action(bipartite).ok


def test_join():
    a, b = Complex.points(['a']), Complex.points(['b'])
    edge = cx.join(a, b)
    assert edge.dimension == 1
    assert len(edge.facets) == 1
    assert edge.vertices == (Tagged('L', 'a'), Tagged('R', 'b'))

    square = cx.join(Complex.points([0, 1]), Complex.points([0, 1]))
    assert len(square.vertices) == 4
    assert len(square.facets) == 4
    assert edge_count(square) == 4

    K = cx.build_S(2, 2)
    assert cx.join(K, Complex.empty()) is K
    assert cx.join(Complex.empty(), K) is K


def test_join_keeps_the_action():
    J = cx.join(cx.build_S(1, 3), cx.build_S(1, 3))
    assert J.p == 3
    assert cx.verify_action(J).ok
    with pytest.raises(InvalidInput):
        cx.join(Complex.points([0]), Complex.points([0]), tagged=False)
    untagged = cx.join(Complex.points([0]), Complex.points([1]), tagged=False)
    assert untagged.vertices == (0, 1)


def test_barycentric():
    edge = Complex.from_facets([['a', 'b']])
    sd = cx.barycentric(edge)
    assert len(sd.vertices) == 3
    assert edge_count(sd) == 2
    hollow = Complex.from_facets([['a', 'b'], ['b', 'c'], ['a', 'c']])
    sd = cx.barycentric(hollow)
    assert len(sd.vertices) == 6
    assert edge_count(sd) == 6
    assert sd.dimension == 1
    with pytest.raises(ResourceLimitExceeded):
        cx.barycentric(hollow, max_vertices=5)


def test_barycentric_carries_the_action():
    sd = cx.barycentric(cx.build_S(2, 3))
    assert sd.p == 3
    assert cx.verify_action(sd).ok


def test_inclusion_of_S():
    for l_plus_1, p in ((1, 2), (2, 2), (2, 3)):
        i = cx.inclusion_S_into_K(l_plus_1, p)
        assert cx.verify_simplicial(i).ok
        assert cx.verify_equivariant(i, p).ok
        assert i.is_injective()
        assert len(i.source.vertices) == len(i.target.vertices)
        assert cx.sd_map(i).is_injective()
    face = frozenset([pf(2, {1: 1}), pf(2, {2: 0})])
    i = cx.inclusion_S_into_K(2, 2)
    assert i.image(face) == pf(2, {1: 1, 2: 0})


def test_vertex_identity_of_S_is_not_simplicial():
    assert cx.verify_simplicial(cx.inclusion(cx.build_S(1, 3), cx.build_K(1, 1, 3))).ok
    report = cx.verify_simplicial(cx.inclusion(cx.build_S(2, 2), cx.build_K(2, 2, 2)))
    assert not report.ok


def test_map_s_examples():
    f = pf(2, {1: 1, 2: 0})
    assert cx.map_s([f], 2, 2, 2) == pf(3, {1: 1, 2: 0, 3: 0})
    f1, f2 = pf(2, {1: 1}), pf(2, {1: 1, 2: 1})
    assert cx.map_s([f1, f2], 2, 2, 2) == pf(3, {1: 1, 2: 1})
    with pytest.raises(InvalidInput):
        cx.map_s([], 2, 2, 2)
    with pytest.raises(InvalidInput):
        cx.map_s([pf(2, {1: 1}), pf(2, {2: 1})], 2, 2, 2)


def test_verify_simplicial():
    square = cx.build_S(2, 2)
    assert cx.verify_simplicial(cx.identity_map(square)).ok
    # swap two vertices across the square so that an edge lands on a diagonal
    order = list(range(4))
    a = square.index_of(pf(2, {1: 0}))
    b = square.index_of(pf(2, {2: 0}))
    order[a], order[b] = order[b], order[a]
    bad = SimplicialMap(square, square, order)
    report = cx.verify_simplicial(bad)
    assert not report.ok
    assert len(report.counterexample) == 2
    with pytest.raises(NotSimplicial):
        cx.sd_map(bad)


def test_verify_equivariant():
    S = cx.build_S(2, 3)
    assert cx.verify_equivariant(cx.identity_map(S), 3).ok
    # swap the values 0 and 1 in every coordinate
    swap = {0: 1, 1: 0, 2: 2}

    def relabel(v):
        return pf(2, {i: swap[x] for i, x in v.entries})

    f = SimplicialMap.from_function(S, S, relabel)
    assert cx.verify_simplicial(f).ok
    report = cx.verify_equivariant(f, 3)
    assert not report.ok
    with pytest.raises(InvalidInput):
        cx.verify_equivariant(cx.identity_map(S), 2)
    plain = Complex.points(['x', 'y'])
    with pytest.raises(MissingAction):
        cx.verify_equivariant(cx.identity_map(plain))


def test_points_without_action():
    with pytest.raises(MissingAction):
        Complex.points(['x'], p=2)


@pytest.mark.parametrize('n, l, p', [
    pytest.param(n, l, p, marks=[pytest.mark.slow] if n == 4 else [])
    for n in range(1, 5) for l in range(1, n + 1) for p in (2, 3)
])
def test_map_s_lands_in_K_and_commutes_with_the_action(n, l, p):
    s = cx.s_map(n, l, p)
    assert all(cx.in_V(s.image(v), n + 1, l, p) for v in s.source.vertices)
    assert cx.verify_equivariant(s, p).ok
    assert cx.verify_simplicial(s).ok == (n == 1)


def test_map_s_breaks_on_a_subdivided_edge():
    f, h = pf(3, {1: 0, 2: 0}), pf(3, {1: 0, 2: 0, 3: 0})
    lone, pair = frozenset([f]), frozenset([f, h])
    assert cx.map_s(lone, 3, 1, 2) == pf(4, {1: 0, 2: 0, 4: 0})
    assert cx.map_s(pair, 3, 1, 2) == pf(4, {1: 0, 2: 0, 3: 0})
    s = cx.s_map(3, 1, 2)
    assert s.source.contains([lone, pair])
    assert not s.target.contains([s.image(lone), s.image(pair)])
    report = cx.verify_simplicial(s)
    assert not report.ok
    assert len(report.counterexample) == 2


def test_compose_tower_empty():
    tower = cx.compose_tower(1, 2, 0)
    assert tower == cx.inclusion_S_into_K(2, 2)


@pytest.mark.parametrize('l, p, l_n', [(0, 2, 1), (0, 2, 2), (0, 3, 1), (0, 3, 2)])
def test_compose_tower_over_points(l, p, l_n):
    tower = cx.compose_tower(l, p, l_n)
    assert tower.target.name == f'K^{{{l + 1 + l_n},{l + 1}}}_{p}'
    assert len(tower.source.vertices) == p
    assert cx.verify_simplicial(tower).ok
    assert cx.verify_equivariant(tower, p).ok


def test_compose_tower_over_the_square():
    tower = cx.compose_tower(1, 2, 1)
    assert len(tower.source.vertices) == 16
    assert cx.verify_equivariant(tower, 2).ok
    assert not cx.verify_simplicial(tower).ok
    with pytest.raises(NotSimplicial):
        cx.compose_tower(1, 2, 2)


def test_compose_rejects_mismatch():
    a = cx.identity_map(cx.build_S(1, 2))
    b = cx.identity_map(cx.build_S(2, 2))
    with pytest.raises(InvalidInput):
        cx.compose(b, a)


def test_reduced_euler_characteristic():
    assert cx.reduced_euler_characteristic(cx.build_S(2, 2)) == 0
    assert cx.reduced_euler_characteristic(cx.build_S(2, 3)) == 4
    assert cx.reduced_euler_characteristic(Complex.points([1, 2, 3])) == 2


def test_vertex_text_format():
    for v in (pf(4, {1: 0, 3: 2}),
              frozenset([pf(3, {1: 1}), pf(3, {1: 1, 2: 1})]),
              Tagged('L', pf(2, {2: 1})),
              7, 'x'):
        assert cx.parse_vertex(cx.format_vertex(v), 4 if isinstance(v, PartialFn) else 3
                               if isinstance(v, frozenset) else 2) == v
    assert cx.format_vertex(frozenset([pf(2, {1: 1, 2: 0}), pf(2, {1: 1})])) == '[1:1|1,2:1,0]'
    with pytest.raises(InvalidInput):
        cx.parse_vertex('1,2:0', 2)
    with pytest.raises(InvalidInput):
        cx.parse_vertex('  ')


def test_facet_files():
    K = cx.build_S(2, 3)
    text = cx.dump_facets(K)
    assert text.splitlines()[0] == '# facets n=2 p=3'
    loaded = cx.load_facets(text)
    assert loaded == K
    assert loaded.flag
    assert cx.verify_action(loaded).ok

    hollow = cx.load_facets('a b\nb c\na c\n')
    assert not hollow.flag
    assert not hollow.contains(['a', 'b', 'c'])
    assert hollow.contains(['a', 'c'])

    empty = cx.load_facets('-\n')
    assert empty.is_empty()
    assert cx.dump_facets(empty) == '# facets\n-\n'
