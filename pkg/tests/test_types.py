import pytest

from lattice.chromatic.types import (
    AnchorReport,
    ColoringMode,
    OutputFormat,
    check_typed_dict,
)


def test_check_typed_dict():
    with pytest.raises(TypeError):
        check_typed_dict({}, {})
    with pytest.raises(AssertionError):
        check_typed_dict({}, dict)
    with pytest.raises(AssertionError):
        check_typed_dict({}, int)
    with pytest.raises(TypeError):
        check_typed_dict({}, AnchorReport)
    with pytest.raises(TypeError):
        check_typed_dict({
            'name': 'eqq1', 'lhs': '17', 'relation': '<', 'rhs': '18',
            'required': True, 'passed': 'yes',
        }, AnchorReport)

    a = check_typed_dict({
        'name': 'claim', 'lhs': None, 'relation': '<', 'rhs': '1/8',
        'required': False, 'passed': False,
    }, AnchorReport)
    assert isinstance(a, dict)


def test_string_enums():
    assert ColoringMode('bounds') is ColoringMode.BOUNDS
    assert OutputFormat.DOT == 'dot'
    with pytest.raises(ValueError):
        OutputFormat('yaml')
