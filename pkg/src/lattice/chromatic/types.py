import enum
from fractions import Fraction
import sys
from typing import (
    Any,
    List,
    Mapping,
    NewType,
    Optional,
    Type,
    TypeVar,
    TypedDict,
    Union,
    cast,
)

import typeguard

__all__ = (
    'AtomMask',
    'Rational',
    'SubmeasureKind',
    'FamilyKind',
    'GraphProvenance',
    'ColoringMode',
    'CoefficientField',
    'OutputFormat',
    'AnchorReport',
    'TheoremReport',
    'check_typed_dict',
)

AtomMask = NewType('AtomMask', int)
"""A set of atoms encoded as an integer bitmask; bit ``i - 1`` stands for atom ``i``."""

Rational = Union[int, Fraction]


class SubmeasureKind(str, enum.Enum):
    TABLE = 'table'
    UNIFORM = 'uniform'
    WEIGHTED = 'weighted'
    CAPPED = 'capped'


class FamilyKind(str, enum.Enum):
    UNIFORM = 'uniform'
    WEIGHTED = 'weighted'
    CAPPED = 'capped'


class GraphProvenance(str, enum.Enum):
    BOX = 'box'
    QUOTIENT = 'quotient'
    EXPLICIT = 'explicit'


class ColoringMode(str, enum.Enum):
    EXACT = 'exact'
    BOUNDS = 'bounds'


class CoefficientField(str, enum.Enum):
    RATIONAL = 'rational'
    PRIME = 'prime'


class OutputFormat(str, enum.Enum):
    TEXT = 'text'
    JSON = 'json'
    CSV = 'csv'
    DOT = 'dot'


class AnchorReport(TypedDict):
    name: str
    lhs: Optional[str]
    relation: str
    rhs: Optional[str]
    required: bool
    passed: bool


class TheoremReport(TypedDict):
    constants: Mapping[str, Any]
    anchors: List[AnchorReport]
    chi_lower: Optional[int]
    chi_upper: Optional[int]
    F_bound: int
    verdict: str


TD = TypeVar('TD')


def check_typed_dict(value: Mapping[Any, Any], expected_type: Type[TD]) -> TD:
    """
    Validates the given dict against the given TypedDict class,
    and wraps the value as the given TypedDict type.

    This is a shortcut to :func:`typeguard.check_typed_dict()` function to fill extra information.
    """
    assert issubclass(expected_type, dict) and hasattr(expected_type, '__annotations__'), \
           f"expected_type ({type(expected_type)}) must be a TypedDict class"
    frame = sys._getframe(1)
    memo = typeguard._TypeCheckMemo(frame.f_globals, frame.f_locals)
    typeguard.check_typed_dict('value', value, expected_type, memo)
    return cast(TD, value)
