import pickle

import pytest
import toml
from toml.decoder import InlineTableDict

from lattice.chromatic import config
from lattice.chromatic.config import override_key, merge, _sanitize_inline_dicts
from lattice.chromatic.exception import ConfigurationError


def test_override_key():
    sample = {
        'caps': {
            'max-vertices': 0,
        },
        'c': 1,
    }
    override_key(sample, ('caps', 'max-vertices'), -1)
    assert sample['caps']['max-vertices'] == -1
    assert sample['c'] == 1

    override_key(sample, ('c',), -1)
    assert sample['caps']['max-vertices'] == -1
    assert sample['c'] == -1

    override_key(sample, ('logging', 'level'), 'DEBUG')
    assert sample['logging'] == {'level': 'DEBUG'}


def test_merge():
    left = {
        'caps': {
            'max-vertices': 5,
            'max-simplices': 0,
        },
        'c': 1,
    }
    right = {
        'caps': {
            'max-simplices': 2,
            'max-search-nodes': 3,
        },
        'x': 10,
    }
    result = merge(left, right)
    assert result == {
        'caps': {
            'max-vertices': 5,
            'max-simplices': 2,
            'max-search-nodes': 3,
        },
        'c': 1,
        'x': 10,
    }


def test_sanitize_inline_dicts():
    sample = '''
    [section]
    a = { x = 1, y = 1 }
    b = { x = 1, y = { t = 2, u = 2 } }
    '''

    result = toml.loads(sample)
    assert isinstance(result['section']['a'], InlineTableDict)
    assert isinstance(result['section']['b']['y'], InlineTableDict)

    result = _sanitize_inline_dicts(result)
    assert isinstance(result['section']['a'], dict)
    assert not isinstance(result['section']['a'], InlineTableDict)
    assert not isinstance(result['section']['b'], InlineTableDict)
    assert not isinstance(result['section']['b']['y'], InlineTableDict)

    data = pickle.dumps(result)
    result = pickle.loads(data)
    assert result == {
        'section': {
            'a': {'x': 1, 'y': 1},
            'b': {'x': 1, 'y': {'t': 2, 'u': 2}},
        },
    }


def test_defaults():
    cfg = config.default_config()
    assert cfg['caps']['max-vertices'] == 20000
    assert cfg['caps']['max-atoms-exhaustive'] == 12
    assert cfg['logging']['level'] == 'WARNING'
    assert config.load() == cfg


def test_load_from_file(tmp_path):
    path = tmp_path / 'custom.toml'
    path.write_text('[caps]\nmax-vertices = 64\n\n[logging]\nlevel = "DEBUG"\n')
    cfg = config.load(path)
    assert cfg['caps']['max-vertices'] == 64
    assert cfg['caps']['max-simplices'] == 2 * 10 ** 6
    assert cfg['logging']['level'] == 'DEBUG'


def test_config_file_lookup(tmp_path, monkeypatch):
    assert config.find_config_file() is None
    local = tmp_path / 'chromatic.toml'
    local.write_text('[caps]\nmax-search-nodes = 10\n')
    assert config.find_config_file() == local
    assert config.load()['caps']['max-search-nodes'] == 10

    other = tmp_path / 'other.toml'
    other.write_text('[caps]\nmax-search-nodes = 20\n')
    monkeypatch.setenv('CHROMATIC_CONFIG_FILE', str(other))
    assert config.find_config_file() == other
    monkeypatch.setenv('CHROMATIC_CONFIG_FILE', str(tmp_path / 'missing.toml'))
    with pytest.raises(ConfigurationError):
        config.find_config_file()


def test_environment_and_explicit_overrides(monkeypatch):
    monkeypatch.setenv('CHROMATIC_MAX_VERTICES', '77')
    cfg = config.load()
    assert cfg['caps']['max-vertices'] == 77
    cfg = config.load(overrides={'caps': {'max-vertices': 5}})
    assert cfg['caps']['max-vertices'] == 5


def test_invalid_configuration(tmp_path, monkeypatch):
    bad = tmp_path / 'bad.toml'
    bad.write_text('[caps\n')
    with pytest.raises(ConfigurationError):
        config.load(bad)
    with pytest.raises(ConfigurationError):
        config.load(tmp_path / 'nowhere.toml')
    with pytest.raises(ConfigurationError):
        config.load(overrides={'caps': {'max-atoms-exhaustive': 40}})
    monkeypatch.setenv('CHROMATIC_MAX_SEARCH_NODES', 'lots')
    with pytest.raises(ConfigurationError):
        config.load()
