import os
from pathlib import Path
from typing import (
    Any,
    Dict,
    Iterator,
    Mapping,
    MutableMapping,
    Optional,
    Tuple,
    Union,
    cast,
)

import toml
import trafaret as t

from .exception import ConfigurationError
from .logging import logging_config_iv

__all__ = (
    'ConfigurationError',
    'caps_config_iv',
    'config_iv',
    'default_config',
    'find_config_file',
    'read_from_file',
    'load',
    'override_key',
    'override_with_env',
    'check',
    'merge',
)

caps_config_iv = t.Dict({
    t.Key('max-vertices', default=20000): t.ToInt[1:],
    t.Key('max-sd-vertices', default=10 ** 6): t.ToInt[1:],
    t.Key('max-simplices', default=2 * 10 ** 6): t.ToInt[1:],
    t.Key('max-search-nodes', default=5 * 10 ** 6): t.ToInt[1:],
    t.Key('max-atoms-exhaustive', default=12): t.ToInt[1:20],
    t.Key('max-cover-candidates', default=200000): t.ToInt[1:],
}).allow_extra('*')

config_iv = t.Dict({
    t.Key('caps', default={}): caps_config_iv,
    t.Key('logging', default={'pkg-ns': {}}): logging_config_iv,
}).allow_extra('*')

# (key path, environment variable) pairs applied on top of the file
env_overrides: Tuple[Tuple[Tuple[str, ...], str], ...] = (
    (('caps', 'max-vertices'), 'CHROMATIC_MAX_VERTICES'),
    (('caps', 'max-sd-vertices'), 'CHROMATIC_MAX_SD_VERTICES'),
    (('caps', 'max-search-nodes'), 'CHROMATIC_MAX_SEARCH_NODES'),
)

CONFIG_FILENAME = 'chromatic.toml'


def _candidate_paths() -> Iterator[Path]:
    yield Path.cwd() / CONFIG_FILENAME
    yield Path.home() / '.config' / 'lattice-chromatic' / CONFIG_FILENAME


def find_config_file() -> Optional[Path]:
    """
    Locates the configuration file.  ``CHROMATIC_CONFIG_FILE`` wins and must
    exist; otherwise the working directory and the user config directory are
    tried in turn, and ``None`` means "use the defaults".
    """
    explicit = os.environ.get('CHROMATIC_CONFIG_FILE')
    if explicit:
        path = Path(explicit)
        if not path.is_file():
            raise ConfigurationError({
                'find_config_file()': f"Could not read config from: {explicit}",
            })
        return path
    return next((p for p in _candidate_paths() if p.is_file()), None)


def read_from_file(toml_path: Union[Path, str]) -> Dict[str, Any]:
    path = Path(toml_path)
    try:
        text = path.read_text()
    except OSError:
        raise ConfigurationError({
            'read_from_file()': f"Could not read config from: {path}",
        })
    try:
        raw = cast(Dict[str, Any], toml.loads(text))
    except toml.TomlDecodeError as e:
        raise ConfigurationError({
            'read_from_file()': f"Invalid TOML in {path}: {e}",
        })
    return _sanitize_inline_dicts(raw)


def override_key(table: MutableMapping[str, Any], key_path: Tuple[str, ...], value: Any) -> None:
    *parents, leaf = key_path
    for key in parents:
        table = table.setdefault(key, {})
    table[leaf] = value


def override_with_env(table: MutableMapping[str, Any], key_path: Tuple[str, ...], env_key: str) -> None:
    if env_key in os.environ:
        override_key(table, key_path, os.environ[env_key])


def check(table: Any, iv: t.Trafaret) -> Dict[str, Any]:
    try:
        return iv.check(table)
    except t.DataError as e:
        raise ConfigurationError(e.as_dict())


def merge(table: Mapping[str, Any], updates: Mapping[str, Any]) -> Dict[str, Any]:
    """Recursively overlays ``updates`` on ``table`` without mutating either."""
    result = dict(table)
    for key, value in updates.items():
        current = result.get(key)
        if isinstance(value, Mapping) and isinstance(current, Mapping):
            result[key] = merge(current, value)
        elif isinstance(value, Mapping):
            result[key] = merge({}, value)
        else:
            result[key] = value
    return result


def default_config() -> Dict[str, Any]:
    return check({}, config_iv)


def load(
    toml_path: Optional[Union[Path, str]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> Dict[str, Any]:
    """
    Read the configuration file (if any), apply environment overrides and
    explicit overrides, and validate the result.
    """
    path = Path(toml_path) if toml_path is not None else find_config_file()
    raw: Dict[str, Any] = read_from_file(path) if path is not None else {}
    for key_path, env_key in env_overrides:
        override_with_env(raw, key_path, env_key)
    if overrides:
        raw = merge(raw, overrides)
    return check(raw, config_iv)


def _sanitize_inline_dicts(table: Mapping[str, Any]) -> Dict[str, Any]:
    # toml returns InlineTableDict subclasses that do not pickle; rebuild plain dicts
    return {
        k: _sanitize_inline_dicts(v) if isinstance(v, dict) else v
        for k, v in table.items()
    }
