# -*- coding: utf-8 -*-
"""
Построчный отчёт по уровню (род, каспы, точки Хегнера, CM-подъёмы)
и сверка с эталонными таблицами.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .catalog import GoldenRow, IntegralityRow, load_signs
from .cusps import rational_star_cusps
from .cyclo_integrality import combined_integrality
from .errors import InvalidInputError, VerificationError
from .genus import genus_star
from .heegner import rational_heegner_report
from .volcano import cm_lift_report

CSV_FIELDS = ("level", "genus", "q_points", "q_cusps", "heegner_count", "heegner", "lifts", "exceptional")


@dataclass(frozen=True)
class LevelRow:
    level: int
    genus: int
    q_points: Optional[int]
    q_cusps: int
    heegner_discs: Tuple[int, ...]
    lifts: Tuple[Tuple[int, int], ...] = ()
    exceptional_residual: Optional[int] = None

    @property
    def heegner_count(self) -> int:
        return len(self.heegner_discs)

    def accounting_holds(self) -> bool:
        """q_cusps + heegner + |lifts| + residual = q_points (если q_points известно)."""
        if self.q_points is None:
            return True
        residual = self.exceptional_residual or 0
        return self.q_cusps + self.heegner_count + len(self.lifts) + residual == self.q_points

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "genus": self.genus,
            "q_points": self.q_points,
            "q_cusps": self.q_cusps,
            "heegner": list(self.heegner_discs),
            "lifts": [list(p) for p in self.lifts],
            "exceptional": self.exceptional_residual,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LevelRow":
        return cls(
            level=int(d["level"]),
            genus=int(d["genus"]),
            q_points=d.get("q_points"),
            q_cusps=int(d["q_cusps"]),
            heegner_discs=tuple(int(D) for D in d.get("heegner", [])),
            lifts=tuple((int(a), int(b)) for a, b in d.get("lifts", [])),
            exceptional_residual=d.get("exceptional"),
        )

    def csv_row(self) -> dict:
        return {
            "level": self.level,
            "genus": self.genus,
            "q_points": "" if self.q_points is None else self.q_points,
            "q_cusps": self.q_cusps,
            "heegner_count": self.heegner_count,
            "heegner": " ".join(str(D) for D in self.heegner_discs),
            "lifts": " ".join(f"{a}->{b}" for a, b in self.lifts),
            "exceptional": "" if self.exceptional_residual is None else self.exceptional_residual,
        }

    def __str__(self) -> str:
        heeg = ", ".join(str(D) for D in self.heegner_discs) or "-"
        lifts = ", ".join(f"({a} -> {b})" for a, b in self.lifts)
        pts = "?" if self.q_points is None else str(self.q_points)
        exc = "" if not self.exceptional_residual else f"  исключ.: {self.exceptional_residual}"
        tail = f"  подъёмы: {lifts}" if lifts else ""
        return f"N={self.level:<5} g*={self.genus}  точек: {pts:<3} каспов: {self.q_cusps}  Хегнер: {heeg}{tail}{exc}"


def level_report(
    N: int,
    golden: Optional[GoldenRow] = None,
    candidates: Optional[Iterable[int]] = None,
    strict: bool = True,
) -> LevelRow:
    """
    Строка таблицы для уровня N; q_points и остаток берутся только из эталона.
    Отрицательный остаток (учтено больше точек, чем есть) - VerificationError;
    при strict=False строка возвращается как есть, для сводной проверки.
    """
    if N < 1:
        raise InvalidInputError(f"уровень должен быть ≥ 1, получено {N}")
    cand = list(candidates) if candidates is not None else None
    genus = genus_star(N)
    cusps = len(rational_star_cusps(N))
    heeg = tuple(rational_heegner_report(N, cand))
    lifts = tuple(e.as_pair() for e in cm_lift_report(N))

    q_points: Optional[int] = None
    residual: Optional[int] = None
    if golden is not None:
        q_points = golden.q_points
        if q_points is not None:
            residual = q_points - cusps - len(heeg) - len(lifts)
            if residual < 0:
                msg = f"N={N}: учтено больше точек, чем в эталоне ({q_points - residual} > {q_points})"
                if strict:
                    raise VerificationError(msg)
                logger.warning(msg)
    row = LevelRow(N, genus, q_points, cusps, heeg, lifts, residual)
    logger.debug("отчёт: {}", row)
    return row


@dataclass(frozen=True)
class Mismatch:
    level: int
    field: str
    expected: object
    actual: object

    def __str__(self) -> str:
        return f"N={self.level}: {self.field}: ожидалось {self.expected}, получено {self.actual}"


def _canon_pairs(pairs) -> List[Tuple[int, int]]:
    return sorted((int(a), int(b)) for a, b in pairs)


def golden_compare(rows: Sequence[LevelRow], golden: Sequence[GoldenRow]) -> List[Mismatch]:
    """Поле за полем; мультимножества сравниваются отсортированными."""
    by_level: Dict[int, LevelRow] = {r.level: r for r in rows}
    out: List[Mismatch] = []
    for g in golden:
        r = by_level.get(g.level)
        if r is None:
            out.append(Mismatch(g.level, "row", "present", "missing"))
            continue
        checks = (
            ("genus", g.genus_expected, r.genus),
            ("q_cusps", g.q_cusps, r.q_cusps),
            ("heegner", sorted(g.heegner), sorted(r.heegner_discs)),
            ("lifts", _canon_pairs(g.lifts), _canon_pairs(r.lifts)),
            ("exceptional", g.exceptional, r.exceptional_residual if r.exceptional_residual is not None else 0),
        )
        for name, expected, actual in checks:
            if expected != actual:
                out.append(Mismatch(g.level, name, expected, actual))
        if r.q_points is not None and r.q_points != g.q_points:
            out.append(Mismatch(g.level, "q_points", g.q_points, r.q_points))
    return out


def golden_accounting(golden: Sequence[GoldenRow]) -> List[int]:
    """Уровни эталона, на которых не сходится баланс точек."""
    return [g.level for g in golden if g.q_points is not None and g.accounted() != g.q_points]


# --- целостность ---------------------------------------------------------------

@dataclass
class IntegralityCheck:
    row: IntegralityRow
    m: int
    m_prime: int
    labels: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.m == self.row.expected_m and self.m_prime == self.row.expected_m_prime

    @property
    def matches_published(self) -> bool:
        return self.m == self.row.m and self.m_prime == self.row.m_prime


def integrality_check(row: IntegralityRow, data_dir=None) -> IntegralityCheck:
    records = load_signs(row.N, row.M, data_dir)
    m, mp, _ = combined_integrality(row.N, row.M, [r.sign_vector() for r in records])
    check = IntegralityCheck(row, m, mp, [r.label for r in records])
    if not check.matches_published:
        logger.warning(
            "({}, {}): вычислено m={}, m'={}; в таблице m={}, m'={}", row.N, row.M, m, mp, row.m, row.m_prime
        )
    return check


# --- сериализация -------------------------------------------------------------

def rows_to_json(rows: Sequence[LevelRow]) -> str:
    return json.dumps({"rows": [r.as_dict() for r in rows]}, ensure_ascii=False, indent=2)


def rows_from_json(text: str) -> List[LevelRow]:
    return [LevelRow.from_dict(d) for d in json.loads(text)["rows"]]


def rows_to_csv(rows: Sequence[LevelRow]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for r in rows:
        writer.writerow(r.csv_row())
    return buf.getvalue()
