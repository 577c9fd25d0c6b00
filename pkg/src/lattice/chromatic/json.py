import enum
from fractions import Fraction
import json
from typing import Any

from .utils import format_rational


class ExtendedJSONEncoder(json.JSONEncoder):
    """Renders exact rationals as ``"a/b"`` strings and sets as sorted lists."""

    def default(self, o):
        if isinstance(o, Fraction):
            return format_rational(o)
        elif isinstance(o, enum.Enum):
            return o.value
        elif isinstance(o, (set, frozenset)):
            return sorted(o)
        return super().default(o)


def dumps(obj: Any, **kwargs) -> str:
    opts = {'cls': ExtendedJSONEncoder, 'sort_keys': True, 'indent': 2, **kwargs}
    return json.dumps(obj, **opts)
