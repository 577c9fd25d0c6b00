from fractions import Fraction
import json

from lattice.chromatic.json import ExtendedJSONEncoder, dumps
from lattice.chromatic.types import OutputFormat


def test_encode():
    ret = json.dumps({'x': Fraction(3, 4), 'y': Fraction(2)}, cls=ExtendedJSONEncoder)
    assert '"3/4"' in ret
    assert '"2"' in ret
    ret = json.dumps({'blocks': frozenset({3, 1, 2})}, cls=ExtendedJSONEncoder)
    assert json.loads(ret) == {'blocks': [1, 2, 3]}
    ret = json.dumps({'format': OutputFormat.CSV}, cls=ExtendedJSONEncoder)
    assert json.loads(ret) == {'format': 'csv'}


def test_dumps_is_stable():
    assert dumps({'b': 1, 'a': Fraction(1, 2)}) == '{\n  "a": "1/2",\n  "b": 1\n}'
