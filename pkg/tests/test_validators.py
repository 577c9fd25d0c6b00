from fractions import Fraction

import pytest
import trafaret as t

from lattice.chromatic import validators as tx


def test_parse_rational():
    assert tx.parse_rational('3/4') == Fraction(3, 4)
    assert tx.parse_rational(' -2 / 6 ') == Fraction(-1, 3)
    assert tx.parse_rational('5') == 5
    assert tx.parse_rational(7) == 7
    assert tx.parse_rational(Fraction(1, 9)) == Fraction(1, 9)
    for bad in ('0.5', '1e3', '1/0', 'half', True, 0.5, None):
        with pytest.raises(ValueError):
            tx.parse_rational(bad)


def test_rational():
    iv = tx.Rational()
    assert iv.check('-1/2') == Fraction(-1, 2)
    with pytest.raises(t.DataError):
        iv.check('0.25')

    iv = tx.Rational(positive=True)
    assert iv.check('1/8') == Fraction(1, 8)
    with pytest.raises(t.DataError):
        iv.check(0)

    iv = tx.Rational(nonnegative=True)
    assert iv.check(0) == 0
    with pytest.raises(t.DataError):
        iv.check('-1/3')


def test_hex_mask():
    iv = tx.HexMask()
    assert iv.check('0x5') == 5
    assert iv.check('f') == 15
    with pytest.raises(t.DataError):
        iv.check('0xZZ')


def test_atom_index_list():
    iv = tx.AtomIndexList()
    assert iv.check([3, 1]) == (3, 1)
    assert iv.check([]) == ()
    for bad in ([0], [1, 1], ['1'], [True], 'abc'):
        with pytest.raises(t.DataError):
            iv.check(bad)


def test_partition_blocks():
    iv = tx.PartitionBlocks()
    assert iv.check([[1, 2], [3]]) == [(1, 2), (3,)]
    for bad in ([], [[1], []], [[0]], 'blocks'):
        with pytest.raises(t.DataError):
            iv.check(bad)


def test_submeasure_file():
    data = tx.submeasure_file_iv.check({
        'atoms': 3,
        'kind': 'table',
        'values': {'0x1': '1/3', '0x6': 1},
        'partition': [[1], [2, 3]],
    })
    assert data['values'] == {1: Fraction(1, 3), 6: Fraction(1)}
    assert data['partition'] == [(1,), (2, 3)]

    data = tx.submeasure_file_iv.check({'atoms': 2, 'kind': 'weighted', 'weights': ['1/2', 2]})
    assert data['weights'] == [Fraction(1, 2), Fraction(2)]

    for bad in (
        {'atoms': 0, 'kind': 'uniform'},
        {'atoms': 2, 'kind': 'gaussian'},
        {'atoms': 2, 'kind': 'uniform', 'weight': '0.5'},
        {'atoms': 2, 'kind': 'capped', 'cap': '-1'},
        {'kind': 'uniform'},
    ):
        with pytest.raises(t.DataError):
            tx.submeasure_file_iv.check(bad)
