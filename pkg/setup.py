#!/usr/bin/env python3
"""
starcurve - установочный скрипт
Пакет, консольная команда ``starcurve`` и встроенные таблицы из starcurve/data
"""

from pathlib import Path

from setuptools import find_packages, setup

ROOT = Path(__file__).resolve().parent


def read_requirements():
    """Зависимости из requirements.txt (без тестовых)"""
    reqs = []
    for line in (ROOT / "requirements.txt").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#") or line.startswith("pytest"):
            continue
        reqs.append(line)
    return reqs


setup(
    name="starcurve",
    version="0.3.0",
    description="Cusps, Heegner points and integrality factors on star quotients X0(N)*",
    long_description=(ROOT / "README.md").read_text(encoding="utf-8"),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=("tests", "examples", "examples.*")),
    package_data={"starcurve": ["data/*.tsv", "data/*.txt", "data/*.json"]},
    include_package_data=True,
    python_requires=">=3.9",
    install_requires=read_requirements(),
    extras_require={"test": ["pytest>=7"]},
    entry_points={"console_scripts": ["starcurve=starcurve.cli:main"]},
)
