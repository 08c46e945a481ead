# -*- coding: utf-8 -*-
import shutil
from pathlib import Path

import pytest

from starcurve.config import PACKAGE_DIR, get_settings

BUNDLED_DATA = PACKAGE_DIR / "data"

_ENV = (
    "STARCURVE_DATA_DIR",
    "STARCURVE_CACHE_DIR",
    "STARCURVE_CATALOG_URL",
    "STARCURVE_CATALOG_TIMEOUT",
    "STARCURVE_LOG_LEVEL",
    "STARCURVE_JOBS",
)


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Никаких внешних переменных; кэш каталога во временном каталоге."""
    for name in _ENV:
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setenv("STARCURVE_DATA_DIR", str(BUNDLED_DATA))
    monkeypatch.setenv("STARCURVE_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("STARCURVE_CATALOG_URL", "")
    yield


@pytest.fixture
def data_dir() -> Path:
    return BUNDLED_DATA


@pytest.fixture
def data_copy(tmp_path) -> Path:
    """Изменяемая копия встроенных данных."""
    dst = tmp_path / "data"
    shutil.copytree(BUNDLED_DATA, dst)
    return dst


@pytest.fixture
def online_settings(tmp_path):
    return get_settings(
        data_dir=str(BUNDLED_DATA),
        cache_dir=str(tmp_path / "cache"),
        catalog_url="http://catalog.test/api/",
        catalog_timeout=2,
    )
