import json
import logging

import pytest

from lattice.chromatic.exception import ConfigurationError
from lattice.chromatic.logging import Logger, BraceStyleAdapter, is_active, pretty


test_log_config = {
    'level': 'DEBUG',
    'drivers': ['console'],
    'pkg-ns': {'': 'DEBUG'},
    'console': {
        'colored': False,
    },
}

log = BraceStyleAdapter(logging.getLogger('lattice.chromatic.testing'))


def test_logger(capsys):
    assert not is_active.get()
    with Logger(test_log_config):
        assert is_active.get()
        log.warning('blizzard warning {}', 123)
        log.debug('cover of {} blocks', pretty([1, 2]))
    assert not is_active.get()
    err = capsys.readouterr().err
    assert 'WARNING blizzard warning 123' in err
    assert 'DEBUG cover of [1, 2] blocks' in err


def test_logger_respects_level(capsys):
    with Logger({**test_log_config, 'level': 'ERROR', 'pkg-ns': {}}):
        log.warning('hidden {}', 1)
        log.error('shown {}', 2)
    err = capsys.readouterr().err
    assert 'hidden' not in err
    assert 'ERROR shown 2' in err


def test_file_driver(tmp_path):
    cfg = {
        'level': 'INFO',
        'drivers': ['file'],
        'file': {'path': str(tmp_path / 'logs'), 'filename': 'chromatic.log'},
    }
    with Logger(cfg):
        log.info('k_eps={} at d={}', 16, 1)
    lines = (tmp_path / 'logs' / 'chromatic.log').read_text().splitlines()
    record = json.loads(lines[-1])
    assert record['message'] == 'k_eps=16 at d=1'
    assert record['level'] == 'INFO'
    assert record['name'] == 'lattice.chromatic.testing'
    assert record['timestamp'].endswith('Z')


def test_invalid_logging_config():
    with pytest.raises(ConfigurationError):
        Logger({'level': 'LOUD'})
    with pytest.raises(ConfigurationError):
        Logger({'drivers': ['file']})
