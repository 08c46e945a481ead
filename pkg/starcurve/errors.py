# -*- coding: utf-8 -*-
"""Иерархия исключений starcurve. CLI переводит их в коды выхода."""

from __future__ import annotations


class StarcurveError(Exception):
    """Базовое исключение пакета."""
    exit_code = 2


class ConfigError(StarcurveError):
    """Неверные переменные окружения или флаги."""


class InvalidInputError(StarcurveError, ValueError):
    """Нарушено предусловие операции (n = 0, Q не делитель Холла, ...)."""


class DiscriminantError(InvalidInputError):
    """Недопустимый дискриминант или несовпадение дискриминантов."""


class FormError(InvalidInputError):
    """Непримитивная или неопределённая квадратичная форма."""


class IdealError(InvalidInputError):
    """Необратимый идеал или неверное разбиение по делителю Холла."""


class IntegralityError(StarcurveError):
    """Нарушено (HV), нулевая сумма корней или не хватает знака."""


class GenusError(StarcurveError):
    """Формула Римана-Гурвица не сходится: внутренняя ошибка подсчёта."""


class DataError(StarcurveError):
    """Нет встроенных данных или они не проходят схему."""


class CatalogError(StarcurveError):
    """Сетевой сбой или битый ответ удалённого каталога."""


class VerificationError(StarcurveError):
    """Расхождение с эталонными таблицами."""
    exit_code = 1
