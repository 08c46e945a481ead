# -*- coding: utf-8 -*-
"""
starcurve - рациональные точки на звёздных факторах X₀(N)* модулярных кривых.

Каспы, точки Хегнера, CM-подъёмы, род, исключительные уровни, множители
целостности и аналитическая оценка ненулевого L-значения.
"""

from .errors import (
    CatalogError,
    ConfigError,
    DataError,
    GenusError,
    IntegralityError,
    InvalidInputError,
    StarcurveError,
    VerificationError,
)

__version__ = "0.3.0"

__all__ = [
    "CatalogError",
    "ConfigError",
    "DataError",
    "GenusError",
    "IntegralityError",
    "InvalidInputError",
    "StarcurveError",
    "VerificationError",
    "__version__",
]
