from fractions import Fraction
import itertools

import attr
from hypothesis import given, settings, strategies as st
import pytest

from lattice.chromatic.exception import Infeasible, InvalidInput, InvalidPartition
from lattice.chromatic.submeasure import (
    FiniteSubmeasure,
    Partition,
    SubmeasureFamily,
    common_refinement,
    covering_number,
    disjointify,
    eval,
    from_document,
    induced_submeasure,
    maximal_admissible_sets,
    refine_below,
    to_document,
    verify_axioms,
)
from lattice.chromatic.types import SubmeasureKind
from lattice.chromatic.utils import atoms_of, mask_of, popcount


def brute_force_cover(mu: FiniteSubmeasure, delta: Fraction) -> int:
    n = mu.atom_count
    full = (1 << n) - 1
    admissible = [m for m in range(1, 1 << n) if mu.eval_mask(m) < delta]
    for size in range(1, n + 1):
        for combo in itertools.combinations(admissible, size):
            union = 0
            for m in combo:
                union |= m
            if union == full:
                return size
    raise AssertionError('no cover found')


def test_eval():
    mu = FiniteSubmeasure.uniform(4, Fraction(1, 4))
    assert eval(mu, {1, 2}) == Fraction(1, 2)
    assert eval(mu, ()) == 0
    capped = FiniteSubmeasure.capped(4, 1, Fraction(1, 2))
    assert eval(capped, {1, 2, 3}) == 1
    assert eval(capped, {4}) == Fraction(1, 2)
    with pytest.raises(InvalidInput):
        eval(mu, {5})
    with pytest.raises(InvalidInput):
        eval(mu, {0})


def test_construction_errors():
    with pytest.raises(InvalidInput):
        FiniteSubmeasure.uniform(0, 1)
    with pytest.raises(InvalidInput):
        FiniteSubmeasure.weighted([1, -1])
    with pytest.raises(InvalidInput):
        FiniteSubmeasure.capped(3, 1)
    with pytest.raises(InvalidInput):
        FiniteSubmeasure.from_table(2, {0b100: 1})
    with pytest.raises(InvalidInput):
        FiniteSubmeasure.from_table(21, {})


def test_table_missing_masks_are_zero():
    mu = FiniteSubmeasure.from_table(2, {0b01: 1, 0b11: 1})
    assert mu.eval_mask(0b10) == 0
    assert mu.total() == 1
    assert mu.kind == SubmeasureKind.TABLE


def test_verify_axioms():
    assert verify_axioms(FiniteSubmeasure.uniform(3, Fraction(1, 3))).ok
    assert verify_axioms(FiniteSubmeasure.capped(5, 1, 1)).ok

    # μ({1}) = 2 but μ({1,2}) = 1
    bad = FiniteSubmeasure.from_table(2, {0b01: 2, 0b11: 1, 0b10: 1})
    report = verify_axioms(bad)
    assert not report.ok
    assert report.reason == 'monotonicity'
    assert report.counterexample == (frozenset({1}), frozenset({1, 2}))

    superadditive = FiniteSubmeasure.from_table(2, {0b01: 1, 0b10: 1, 0b11: 3})
    report = verify_axioms(superadditive)
    assert not report.ok
    assert report.reason == 'subadditivity'
    assert report.counterexample == (frozenset({1}), frozenset({2}))

    nonzero = FiniteSubmeasure.from_table(1, {0: 1, 1: 1})
    assert not verify_axioms(nonzero).ok


def test_verify_axioms_sampled():
    mu = FiniteSubmeasure.capped(16, 2, Fraction(1, 4))
    report = verify_axioms(mu, exhaustive_limit=8, samples=500, seed=7)
    assert report.ok
    assert report.checked_pairs == 500


@pytest.mark.parametrize('mu', [
    FiniteSubmeasure.uniform(6, Fraction(1, 6)),
    FiniteSubmeasure.weighted([1, 2, 3, 4]),
    FiniteSubmeasure.capped(7, Fraction(1, 2), Fraction(1, 5)),
    FiniteSubmeasure.capped(4, 1, weights=[Fraction(1, 2), 1, Fraction(1, 3), 0]),
])
def test_builders_are_submeasures(mu):
    assert verify_axioms(mu).ok


def test_covering_number_examples(uniform4):
    result = covering_number(uniform4, Fraction(1, 2))
    assert result.k == 4
    assert sorted(map(sorted, result.cover)) == [[1], [2], [3], [4]]
    result = covering_number(uniform4, Fraction(3, 5))
    assert result.k == 2
    assert all(uniform4.eval_mask(m) < Fraction(3, 5) for m in result.masks)
    covered = 0
    for m in result.masks:
        covered |= m
    assert covered == uniform4.ground


def test_covering_number_infeasible():
    mu = FiniteSubmeasure.uniform(2, Fraction(1, 2))
    with pytest.raises(Infeasible) as e:
        covering_number(mu, Fraction(1, 4))
    assert e.value.atom == 1
    with pytest.raises(InvalidInput):
        covering_number(mu, 0)


def test_covering_number_is_deterministic():
    mu = FiniteSubmeasure.capped(6, 1, Fraction(1, 5))
    first = covering_number(mu, Fraction(1, 2))
    second = covering_number(mu, Fraction(1, 2))
    assert first == second


@pytest.mark.parametrize('n', [3, 5, 8])
def test_covering_number_matches_brute_force(n):
    members = [
        FiniteSubmeasure.uniform(n, Fraction(1, n)),
        FiniteSubmeasure.capped(n, Fraction(1, 2), Fraction(1, n)),
        FiniteSubmeasure.weighted([Fraction(i, n * n) for i in range(1, n + 1)]),
    ]
    for mu in members:
        for j in range(1, 9):
            delta = Fraction(j, 8)
            if any(v >= delta for v in mu.atom_values()):
                with pytest.raises(Infeasible):
                    covering_number(mu, delta)
                continue
            assert covering_number(mu, delta).k == brute_force_cover(mu, delta)


def test_maximal_admissible_sets(uniform4):
    sets = maximal_admissible_sets(uniform4, Fraction(3, 5))
    assert [atoms_of(m) for m in sets] == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    # nothing but the empty set when every atom is too heavy
    assert maximal_admissible_sets(uniform4, Fraction(1, 5)) == [0]


def test_induced_submeasure(uniform4):
    halves = Partition.from_lists([[1, 2], [3, 4]])
    induced = induced_submeasure(uniform4, halves)
    assert induced.kind == SubmeasureKind.UNIFORM
    assert induced.atom_values() == (Fraction(1, 2), Fraction(1, 2))

    same = induced_submeasure(uniform4, Partition.singletons(4))
    assert same.atom_values() == uniform4.atom_values()

    capped = FiniteSubmeasure.capped(4, 1, Fraction(1, 2))
    induced = induced_submeasure(capped, Partition.from_lists([[1, 2, 3], [4]]))
    assert induced.eval_mask(0b01) == 1
    assert induced.eval_mask(0b10) == Fraction(1, 2)
    assert induced.eval_mask(0b11) == 1

    with pytest.raises(InvalidPartition):
        induced_submeasure(uniform4, Partition.singletons(3))


def test_induced_table_submeasure():
    mu = FiniteSubmeasure.from_table(3, {m: Fraction(popcount(m), 3) for m in range(8)})
    induced = induced_submeasure(mu, Partition.from_lists([[1, 3], [2]]))
    assert induced.kind == SubmeasureKind.TABLE
    assert induced.eval_mask(0b01) == Fraction(2, 3)
    assert induced.eval_mask(0b11) == 1


def test_common_refinement():
    a = Partition.from_lists([[1, 2], [3, 4]])
    b = Partition.from_lists([[1, 3], [2, 4]])
    assert common_refinement([a, b]).as_lists() == [[1], [2], [3], [4]]
    assert common_refinement([a]) == a
    c = Partition.from_lists([[1, 2, 3], [4]])
    d = Partition.from_lists([[1], [2, 3, 4]])
    assert common_refinement([c, d]).as_lists() == [[1], [2, 3], [4]]
    with pytest.raises(InvalidPartition):
        common_refinement([])
    with pytest.raises(InvalidPartition):
        common_refinement([a, Partition.singletons(5)])


def test_partition_validation():
    with pytest.raises(InvalidPartition):
        Partition.from_lists([[1, 2], [2, 3]])
    with pytest.raises(InvalidPartition):
        Partition.from_lists([[1], [3]], 3)
    with pytest.raises(InvalidPartition):
        Partition.from_lists([[0, 1]])
    with pytest.raises(InvalidPartition):
        Partition.consecutive(2, 3)
    assert Partition.consecutive(5, 2).as_lists() == [[1, 2, 3], [4, 5]]
    fine = Partition.from_lists([[1], [2], [3, 4]])
    coarse = Partition.from_lists([[1, 2], [3, 4]])
    assert fine.refines(coarse)
    assert not coarse.refines(fine)
    assert fine.parent_indices(coarse) == (0, 0, 1)


def test_disjointify():
    cover = [mask_of([1, 2]), mask_of([2, 3]), mask_of([1, 3, 4])]
    assert disjointify(cover, 4).as_lists() == [[1, 2], [3], [4]]
    with pytest.raises(InvalidPartition):
        disjointify([mask_of([1])], 2)


def test_refine_below():
    mu = FiniteSubmeasure.uniform(8, Fraction(1, 8))
    whole = Partition(8, [mu.ground])
    # pairs sit exactly at 1/4, so the threshold is not met
    assert len(refine_below(mu, whole, Fraction(1, 4))) == 8
    assert refine_below(mu, whole, Fraction(1, 2)).as_lists() == [[1, 2, 3], [4, 5, 6], [7, 8]]
    with pytest.raises(Infeasible):
        refine_below(mu, whole, Fraction(1, 8))


def test_family_members():
    for family in (SubmeasureFamily.uniform(), SubmeasureFamily.capped(Fraction(1, 2)),
                   SubmeasureFamily.weighted([1, 2])):
        for r in (1, 3, 8):
            mu = family.member(r)
            assert all(v <= Fraction(1, r) for v in mu.atom_values())
            assert verify_axioms(mu).ok
    assert SubmeasureFamily.weighted([1, 2]).member(3).atom_count == 6
    assert SubmeasureFamily.capped(Fraction(1, 2)).describe() == 'capped(1/2)'
    with pytest.raises(InvalidInput):
        SubmeasureFamily.weighted([])
    with pytest.raises(InvalidInput):
        SubmeasureFamily.uniform().member(0)


def test_submeasure_files():
    mu, partition = from_document({'atoms': 4, 'kind': 'capped', 'cap': '1', 'c': '1/2',
                               'partition': [[1, 2], [3, 4]]})
    assert mu == FiniteSubmeasure.capped(4, 1, Fraction(1, 2))
    assert partition is not None and partition.as_lists() == [[1, 2], [3, 4]]

    mu, partition = from_document({'atoms': 2, 'kind': 'table', 'values': {'1': '2', '3': '1'}})
    assert mu.eval_mask(1) == 2
    assert partition is None

    mu, _ = from_document({'atoms': 3, 'kind': 'uniform'})
    assert mu.total() == 1

    with pytest.raises(InvalidInput):
        from_document({'atoms': 3, 'kind': 'weighted'})
    with pytest.raises(InvalidInput):
        from_document({'atoms': 3, 'kind': 'weighted', 'weights': ['1', '1']})
    with pytest.raises(InvalidInput):
        from_document({'atoms': 3, 'kind': 'uniform', 'weight': '0.5'})

    original = FiniteSubmeasure.weighted([1, Fraction(1, 3)])
    restored, _ = from_document(to_document(original))
    assert restored == original


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=1, max_value=6), min_size=1, max_size=6),
       st.integers(min_value=1, max_value=12))
def test_cover_witness_is_valid(weights, j):
    mu = FiniteSubmeasure.weighted([Fraction(w, 24) for w in weights])
    delta = Fraction(j, 8)
    try:
        result = covering_number(mu, delta)
    except Infeasible:
        assert any(v >= delta for v in mu.atom_values())
        return
    assert result.k == len(result.cover)
    union = 0
    for m in result.masks:
        assert mu.eval_mask(m) < delta
        union |= m
    assert union == mu.ground
    assert result.k == brute_force_cover(mu, delta)


submeasures = st.one_of(
    st.builds(
        lambda ws: FiniteSubmeasure.weighted([Fraction(w, 24) for w in ws]),
        st.lists(st.integers(min_value=0, max_value=6), min_size=1, max_size=6),
    ),
    st.builds(
        lambda n, cap, c: FiniteSubmeasure.capped(n, Fraction(cap, 8), Fraction(c, 16)),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=8),
        st.integers(min_value=1, max_value=8),
    ),
    st.builds(
        lambda n: FiniteSubmeasure.uniform(n, Fraction(1, n)),
        st.integers(min_value=1, max_value=6),
    ),
)


@settings(max_examples=50, deadline=None)
@given(submeasures)
def test_covering_number_is_antitone_in_delta(mu):
    sizes = []
    for j in range(1, 17):
        try:
            sizes.append(covering_number(mu, Fraction(j, 8)).k)
        except Infeasible:
            # only the smallest thresholds can be infeasible
            assert not sizes
    assert sizes == sorted(sizes, reverse=True)


def test_evaluation_leaves_instances_unchanged():
    mu = FiniteSubmeasure.capped(5, Fraction(1, 2), Fraction(1, 5))
    twin = FiniteSubmeasure.capped(5, Fraction(1, 2), Fraction(1, 5))
    before = hash(mu)
    assert all(f.init for f in attr.fields(FiniteSubmeasure))
    assert mu.total() == Fraction(1, 2)
    assert [mu.eval_mask(m) for m in range(32)] == [twin.eval_mask(m) for m in range(32)]
    assert hash(mu) == before == hash(twin)
    assert mu == twin
    assert repr(mu) == repr(twin)
    with pytest.raises(attr.exceptions.FrozenInstanceError):
        mu.cap = Fraction(1)  # type: ignore[misc]
