# -*- coding: utf-8 -*-
"""
Конфигурация starcurve

Все параметры берутся из переменных окружения (локальный ``.env`` тоже
подхватывается через python-dotenv):

* ``STARCURVE_DATA_DIR``        - каталог встроенных таблиц (по умолчанию ``starcurve/data``)
* ``STARCURVE_CACHE_DIR``       - кэш ответов каталога (по умолчанию ``~/.cache/starcurve``)
* ``STARCURVE_CATALOG_URL``     - адрес удалённого каталога newform-ов; пусто = офлайн
* ``STARCURVE_CATALOG_TIMEOUT`` - таймаут HTTP в секундах
* ``STARCURVE_LOG_LEVEL``       - уровень loguru (DEBUG, INFO, WARNING, ...)
* ``STARCURVE_JOBS``            - число потоков для пакетных отчётов

Модульные константы читаются один раз при импорте; ``get_settings`` собирает
проверенный объект ``Settings``, который CLI может переопределить флагами.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from loguru import logger
from pydantic import BaseModel, ValidationError, field_validator

from .errors import ConfigError

load_dotenv()

PACKAGE_DIR = Path(__file__).resolve().parent

DATA_DIR = os.getenv("STARCURVE_DATA_DIR", str(PACKAGE_DIR / "data"))
CACHE_DIR = os.getenv("STARCURVE_CACHE_DIR", str(Path.home() / ".cache" / "starcurve"))
CATALOG_URL = os.getenv("STARCURVE_CATALOG_URL", "").strip()
CATALOG_TIMEOUT = os.getenv("STARCURVE_CATALOG_TIMEOUT", "10")
LOG_LEVEL = os.getenv("STARCURVE_LOG_LEVEL", "WARNING").upper().strip()
JOBS = os.getenv("STARCURVE_JOBS", "4")

_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")
LOG_FORMAT = "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | <cyan>{name}</cyan> - {message}"


class Settings(BaseModel):
    """Проверенный набор параметров запуска."""
    data_dir: Path
    cache_dir: Path
    catalog_url: Optional[str] = None
    catalog_timeout: float = 10.0
    log_level: str = "WARNING"
    jobs: int = 4

    @field_validator("catalog_url")
    @classmethod
    def _blank_url(cls, v: Optional[str]) -> Optional[str]:
        if v is None or not v.strip():
            return None
        return v.strip().rstrip("/")

    @field_validator("catalog_timeout")
    @classmethod
    def _positive_timeout(cls, v: float) -> float:
        if v <= 0:
            raise ValueError("таймаут каталога должен быть положительным")
        return v

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        v = v.upper().strip()
        if v not in _LEVELS:
            raise ValueError(f"неизвестный уровень логирования {v!r}")
        return v

    @field_validator("jobs")
    @classmethod
    def _positive_jobs(cls, v: int) -> int:
        if v < 1:
            raise ValueError("нужен хотя бы один рабочий поток")
        return v


def get_settings(**overrides) -> Settings:
    """Собирает Settings из окружения; непустые ``overrides`` имеют приоритет."""
    raw = {
        "data_dir": os.getenv("STARCURVE_DATA_DIR", DATA_DIR),
        "cache_dir": os.getenv("STARCURVE_CACHE_DIR", CACHE_DIR),
        "catalog_url": os.getenv("STARCURVE_CATALOG_URL", CATALOG_URL),
        "catalog_timeout": os.getenv("STARCURVE_CATALOG_TIMEOUT", CATALOG_TIMEOUT),
        "log_level": os.getenv("STARCURVE_LOG_LEVEL", LOG_LEVEL),
        "jobs": os.getenv("STARCURVE_JOBS", JOBS),
    }
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return Settings(**raw)
    except ValidationError as e:
        raise ConfigError(f"некорректная конфигурация: {e}") from e


def data_path(name: str, data_dir: Optional[Path] = None) -> Path:
    """Путь к встроенному файлу данных."""
    base = Path(data_dir) if data_dir is not None else Path(os.getenv("STARCURVE_DATA_DIR", DATA_DIR))
    return base / name


def setup_logging(level: Optional[str] = None) -> None:
    """Один sink в stderr; повторный вызов переустанавливает уровень."""
    level = (level or LOG_LEVEL).upper()
    if level not in _LEVELS:
        raise ConfigError(f"неизвестный уровень логирования {level!r}")
    logger.remove()
    logger.add(sys.stderr, level=level, format=LOG_FORMAT, colorize=None)
