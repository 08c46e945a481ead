# -*- coding: utf-8 -*-
import pytest

from starcurve.config import data_path, get_settings, setup_logging
from starcurve.errors import ConfigError


def test_defaults_from_env(data_dir):
    s = get_settings()
    assert s.data_dir == data_dir
    assert s.catalog_url is None
    assert s.jobs >= 1


def test_overrides_win(monkeypatch):
    monkeypatch.setenv("STARCURVE_JOBS", "3")
    assert get_settings().jobs == 3
    assert get_settings(jobs=7).jobs == 7


def test_url_is_normalized():
    s = get_settings(catalog_url="  http://x.test/api/  ")
    assert s.catalog_url == "http://x.test/api"


@pytest.mark.parametrize("bad", [{"jobs": 0}, {"catalog_timeout": -1}, {"log_level": "LOUD"}])
def test_invalid_values(bad):
    with pytest.raises(ConfigError):
        get_settings(**bad)


def test_setup_logging_rejects_unknown_level():
    with pytest.raises(ConfigError):
        setup_logging("chatty")
    setup_logging("debug")
    setup_logging("WARNING")


def test_data_path(tmp_path, data_dir):
    assert data_path("al_signs.tsv") == data_dir / "al_signs.tsv"
    assert data_path("x.json", tmp_path) == tmp_path / "x.json"
