from fractions import Fraction
import json
from pathlib import Path

from click.testing import CliRunner
import pytest

from lattice.chromatic.json import dumps
from lattice.chromatic.submeasure import FiniteSubmeasure


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    # Keep user-level configuration files and cap overrides out of the tests.
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv('HOME', str(tmp_path))
    for key in ('CHROMATIC_CONFIG_FILE', 'CHROMATIC_MAX_VERTICES',
                'CHROMATIC_MAX_SD_VERTICES', 'CHROMATIC_MAX_SEARCH_NODES'):
        monkeypatch.delenv(key, raising=False)


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def write_json(tmp_path):

    def _write(name: str, data) -> Path:
        path = tmp_path / name
        path.write_text(dumps(data) if not isinstance(data, str) else data)
        return path

    return _write


@pytest.fixture
def write_text(tmp_path):

    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text)
        return path

    return _write


@pytest.fixture
def uniform4():
    return FiniteSubmeasure.uniform(4, Fraction(1, 4))


def load_json(text: str):
    return json.loads(text)
