# -*- coding: utf-8 -*-
"""
Каталог внешних данных: знаки Аткина-Лехнера newform-ов, закреплённые
показатели корней, кандидаты в дискриминанты и эталонные таблицы.

Всё читается из встроенного каталога ``data/``. Удалённый каталог
(``STARCURVE_CATALOG_URL``) необязателен: при любой ошибке ``fetch_signs``
пишет предупреждение и возвращает встроенные записи.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Dict, List, Literal, Optional, Sequence, Tuple

import httpx
from loguru import logger
from pydantic import BaseModel, ConfigDict, ValidationError, field_validator, model_validator

from .arith import factorize
from .config import Settings, data_path, get_settings
from .cyclo_integrality import SignVector
from .errors import CatalogError, DataError

SIGNS_FILE = "al_signs.tsv"
ROOTS_FILE = "root_exponents.tsv"
CANDIDATES_FILE = "heegner_discriminants.txt"
INTEGRALITY_FILE = "integrality_table.json"
LISTS_FILE = "exceptional_lists.json"
POINTS_FILE = "exceptional_points.json"
GOLDEN_TABLES = {"table1": "table1.json", "table4": "table4.json"}

NEWFORMS_PATH = "mf_newforms"


class ALSignRecord(BaseModel):
    """Вектор знаков ε(w_q) одного newform-а уровня M."""
    model_config = ConfigDict(frozen=True)

    M: int
    label: str
    signs: Dict[int, int]
    source: Literal["bundled", "remote"] = "bundled"
    N: Optional[int] = None

    @field_validator("signs")
    @classmethod
    def _plus_minus_one(cls, v: Dict[int, int]) -> Dict[int, int]:
        for q, s in v.items():
            if s not in (1, -1):
                raise ValueError(f"знак для q={q} должен быть ±1, получено {s}")
        return v

    @model_validator(mode="after")
    def _covers_level(self) -> "ALSignRecord":
        if self.M < 1:
            raise ValueError(f"уровень должен быть ≥ 1, получено {self.M}")
        primes = set(factorize(self.M).primes) if self.M > 1 else set()
        if set(self.signs) != primes:
            raise ValueError(f"знаки {sorted(self.signs)} не совпадают с простыми уровня {self.M}: {sorted(primes)}")
        return self

    def sign_vector(self) -> SignVector:
        return SignVector.from_mapping(self.M, self.signs, self.label)


class IntegralityRow(BaseModel):
    model_config = ConfigDict(extra="forbid")

    N: int
    M: int
    m: int
    m_prime: int
    expected_m: int
    expected_m_prime: int
    flags: List[str] = []
    note: str = ""
    by_convention: Dict[str, Tuple[int, int]] = {}


class GoldenRow(BaseModel):
    """Строка эталонной таблицы рациональных точек."""
    model_config = ConfigDict(extra="forbid")

    level: int
    genus: int
    q_points: Optional[int]
    q_cusps: int
    heegner: List[int]
    lifts: List[Tuple[int, int]] = []
    exceptional: int = 0
    expected_genus: Optional[int] = None
    flags: List[str] = []
    note: str = ""

    @property
    def genus_expected(self) -> int:
        """Род, с которым сверяется вычисление: опубликованный или исправленный."""
        return self.genus if self.expected_genus is None else self.expected_genus

    def accounted(self) -> int:
        return self.q_cusps + len(self.heegner) + len(self.lifts) + self.exceptional


# --- чтение встроенных файлов -------------------------------------------------

def _read_lines(name: str, data_dir: Optional[Path]) -> List[List[str]]:
    path = data_path(name, data_dir)
    if not path.exists():
        raise DataError(f"нет файла данных {path}")
    rows = []
    with open(path, "r", encoding="utf-8") as f:
        for raw in f:
            line = raw.split("#", 1)[0].strip()
            if line:
                rows.append(line.split())
    return rows


def _read_json(name: str, data_dir: Optional[Path]):
    path = data_path(name, data_dir)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except FileNotFoundError as e:
        raise DataError(f"нет файла данных {path}") from e
    except json.JSONDecodeError as e:
        raise DataError(f"{path}: битый JSON ({e})") from e


def _admissible(rec: ALSignRecord, N: int) -> bool:
    return rec.sign_vector().is_admissible(N)


def load_signs(N: int, M: int, data_dir: Optional[Path] = None) -> List[ALSignRecord]:
    """Встроенные записи для пары (N, M); недопустимые отбрасываются с предупреждением."""
    grouped: Dict[str, Dict[int, int]] = {}
    for i, parts in enumerate(_read_lines(SIGNS_FILE, data_dir), 1):
        if len(parts) != 5:
            raise DataError(f"{SIGNS_FILE}: строка {i}: ожидалось 5 полей, получено {len(parts)}")
        try:
            n, m, label, q, s = int(parts[0]), int(parts[1]), parts[2], int(parts[3]), int(parts[4])
        except ValueError as e:
            raise DataError(f"{SIGNS_FILE}: строка {i}: {e}") from e
        if (n, m) == (N, M):
            grouped.setdefault(label, {})[q] = s
    if not grouped:
        raise DataError(f"нет встроенных знаков для (N, M) = ({N}, {M})")

    out: List[ALSignRecord] = []
    for label, signs in grouped.items():
        try:
            rec = ALSignRecord(M=M, label=label, signs=signs, N=N)
        except ValidationError as e:
            logger.warning("({}, {}) {}: запись отброшена: {}", N, M, label, e)
            continue
        if not _admissible(rec, N):
            logger.warning("({}, {}) {}: нет q | gcd(M, N/M) с ε(w_q) = -1, запись отброшена", N, M, label)
            continue
        out.append(rec)
    if not out:
        raise DataError(f"для ({N}, {M}) не осталось допустимых записей")
    logger.debug("({}, {}): встроенных записей {}", N, M, len(out))
    return out


def load_level_signs(M: int, data_dir: Optional[Path] = None) -> List[ALSignRecord]:
    """Все встроенные newform-ы уровня M без отбора по N; одинаковые (метка, знаки) склеиваются."""
    grouped: Dict[Tuple[int, str], Dict[int, int]] = {}
    for parts in _read_lines(SIGNS_FILE, data_dir):
        if len(parts) == 5 and int(parts[1]) == M:
            grouped.setdefault((int(parts[0]), parts[2]), {})[int(parts[3])] = int(parts[4])
    unique = {(label, tuple(sorted(signs.items()))) for (_, label), signs in grouped.items()}
    out: List[ALSignRecord] = []
    for label, items in sorted(unique):
        signs = dict(items)
        try:
            out.append(ALSignRecord(M=M, label=label, signs=signs))
        except ValidationError as e:
            logger.warning("M={} {}: запись отброшена: {}", M, label, e)
    return out


def read_sign_file(path: Path, N: int, M: int) -> List[ALSignRecord]:
    """
    Пользовательский TSV со строками `N M q sign` (необязательная пятая колонка - метка).
    Берутся строки пары (N, M); каждая метка даёт один вектор знаков.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"нет файла знаков {path}")
    grouped: Dict[str, Dict[int, int]] = {}
    with open(path, "r", encoding="utf-8") as f:
        for i, raw in enumerate(f, 1):
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            if len(parts) not in (4, 5):
                raise DataError(f"{path.name}: строка {i}: ожидалось `N M q sign`, получено {len(parts)} полей")
            try:
                n, m, q, s = (int(v) for v in parts[:4])
            except ValueError as e:
                raise DataError(f"{path.name}: строка {i}: {e}") from e
            if (n, m) != (N, M):
                continue
            label = parts[4] if len(parts) == 5 else path.stem
            signs = grouped.setdefault(label, {})
            if q in signs and signs[q] != s:
                raise DataError(f"{path.name}: строка {i}: противоречивые знаки для q={q}")
            signs[q] = s
    if not grouped:
        raise DataError(f"{path.name}: нет строк для (N, M) = ({N}, {M})")
    try:
        return [ALSignRecord(M=M, label=label, signs=signs, N=N) for label, signs in grouped.items()]
    except ValidationError as e:
        raise DataError(f"{path.name}: {e}") from e


def bundled_pairs(data_dir: Optional[Path] = None) -> List[Tuple[int, int]]:
    pairs = {(int(p[0]), int(p[1])) for p in _read_lines(SIGNS_FILE, data_dir)}
    return sorted(pairs)


def load_root_exponents(N: int, M: int, data_dir: Optional[Path] = None) -> Dict[int, Dict[int, int]]:
    """{d: {p: k}}: ζ_{p^e} берётся как ζ^{k} в слагаемом с индексом d."""
    out: Dict[int, Dict[int, int]] = {}
    for i, parts in enumerate(_read_lines(ROOTS_FILE, data_dir), 1):
        if len(parts) != 5:
            raise DataError(f"{ROOTS_FILE}: строка {i}: ожидалось 5 полей")
        n, m, d, p, k = (int(v) for v in parts)
        if (n, m) == (N, M):
            out.setdefault(d, {})[p] = k
    return out


def load_candidates(data_dir: Optional[Path] = None) -> List[int]:
    """Кандидаты D < 0 из встроенного списка."""
    try:
        rows = _read_lines(CANDIDATES_FILE, data_dir)
    except DataError as e:
        raise DataError(f"список кандидатов в дискриминанты недоступен: {e}") from e
    out = []
    for parts in rows:
        for tok in parts:
            D = int(tok)
            if D >= 0 or D % 4 not in (0, 1):
                raise DataError(f"{CANDIDATES_FILE}: {D} не дискриминант мнимого порядка")
            out.append(D)
    if not out:
        raise DataError(f"{CANDIDATES_FILE} пуст")
    return sorted(set(out), key=abs)


def load_integrality_table(data_dir: Optional[Path] = None) -> List[IntegralityRow]:
    raw = _read_json(INTEGRALITY_FILE, data_dir)
    try:
        return [IntegralityRow(**r) for r in raw["rows"]]
    except (KeyError, TypeError, ValidationError) as e:
        raise DataError(f"{INTEGRALITY_FILE}: не соответствует схеме: {e}") from e


def load_exceptional_lists(data_dir: Optional[Path] = None) -> Dict[str, List[int]]:
    raw = _read_json(LISTS_FILE, data_dir)
    try:
        return {k: sorted(int(n) for n in v) for k, v in raw.items() if not k.startswith("_")}
    except (TypeError, ValueError) as e:
        raise DataError(f"{LISTS_FILE}: не соответствует схеме: {e}") from e


def load_exceptional_points(data_dir: Optional[Path] = None) -> dict:
    """Остатки, j-многочлены (только для показа) и таблица фактор-якобианов ранга 0."""
    raw = _read_json(POINTS_FILE, data_dir)
    for key in ("residuals", "j_polynomials", "rank_zero_quotients"):
        if key not in raw:
            raise DataError(f"{POINTS_FILE}: нет раздела {key!r}")
    raw["residuals"] = {int(k): int(v) for k, v in raw["residuals"].items()}
    return raw


def load_golden_table(name: str, data_dir: Optional[Path] = None) -> List[GoldenRow]:
    if name not in GOLDEN_TABLES:
        raise DataError(f"неизвестная таблица {name!r}; есть {sorted(GOLDEN_TABLES)}")
    return parse_golden(_read_json(GOLDEN_TABLES[name], data_dir), name)


def parse_golden(raw, source: str = "golden") -> List[GoldenRow]:
    try:
        rows = [GoldenRow(**r) for r in raw["rows"]]
    except (KeyError, TypeError, ValidationError) as e:
        raise DataError(f"{source}: не соответствует схеме: {e}") from e
    levels = [r.level for r in rows]
    if len(levels) != len(set(levels)):
        raise DataError(f"{source}: повторяющиеся уровни")
    return rows


# --- удалённый каталог --------------------------------------------------------

def _cache_file(cache_dir: Path, url: str, params: dict) -> Path:
    key = url + "?" + "&".join(f"{k}={params[k]}" for k in sorted(params))
    return cache_dir / (hashlib.sha256(key.encode("utf-8")).hexdigest() + ".json")


def _write_cache(path: Path, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(payload, f, ensure_ascii=False)
        os.replace(tmp, path)
    except OSError:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_newforms(payload, M: int) -> List[ALSignRecord]:
    try:
        entries = payload["data"]
    except (KeyError, TypeError) as e:
        raise CatalogError(f"ответ каталога без поля data: {e}") from e
    out = []
    for entry in entries:
        try:
            signs = {int(p): int(s) for p, s in entry["atkin_lehner_eigenvals"]}
            out.append(ALSignRecord(M=M, label=str(entry["label"]), signs=signs, source="remote"))
        except (KeyError, TypeError, ValueError) as e:
            raise CatalogError(f"битая запись каталога {entry!r}: {e}") from e
    return out


def _fallback(N: Optional[int], M: int, data_dir: Optional[Path]) -> List[ALSignRecord]:
    try:
        if N is None:
            return load_level_signs(M, data_dir)
        return load_signs(N, M, data_dir)
    except DataError as e:
        logger.warning("встроенных данных тоже нет: {}", e)
        return []


def fetch_signs(
    M: int,
    N: Optional[int] = None,
    settings: Optional[Settings] = None,
    transport: Optional[httpx.BaseTransport] = None,
) -> List[ALSignRecord]:
    """
    Newform-ы уровня M (вес 2, тривиальный характер) из удалённого каталога.
    С заданным N оставляются только допустимые для (N, M) записи.
    Ответ кэшируется по sha256 от URL; сбой сети или разбора - откат к встроенным.
    """
    settings = settings or get_settings()
    if not settings.catalog_url:
        logger.warning("STARCURVE_CATALOG_URL не задан, берём встроенные знаки для M={}", M)
        return _fallback(N, M, settings.data_dir)

    url = f"{settings.catalog_url}/{NEWFORMS_PATH}"
    params = {"level": M, "weight": 2, "char_order": 1, "_format": "json", "_fields": "label,atkin_lehner_eigenvals"}
    cache = _cache_file(settings.cache_dir, url, params)
    try:
        if cache.exists():
            logger.debug("каталог: попадание в кэш {}", cache.name)
            with open(cache, "r", encoding="utf-8") as f:
                payload = json.load(f)
        else:
            with httpx.Client(timeout=settings.catalog_timeout, transport=transport) as client:
                resp = client.get(url, params=params)
                resp.raise_for_status()
                payload = resp.json()
            _parse_newforms(payload, M)  # битый ответ в кэш не попадает
            try:
                _write_cache(cache, payload)
            except OSError as e:
                logger.warning("не удалось записать кэш {}: {}", cache, e)
        records = _parse_newforms(payload, M)
    except (CatalogError, httpx.HTTPError, ValidationError, ValueError) as e:
        logger.warning("каталог недоступен для M={} ({}), берём встроенные знаки", M, e)
        return _fallback(N, M, settings.data_dir)

    if N is not None:
        kept = [r.model_copy(update={"N": N}) for r in records if _admissible(r, N)]
        logger.debug("каталог: M={} записей {}, допустимых для N={}: {}", M, len(records), N, len(kept))
        records = kept
    return records


def signs_agree(bundled: Sequence[ALSignRecord], remote: Sequence[ALSignRecord]) -> List[str]:
    """Метки, у которых встроенные и удалённые знаки расходятся."""
    remote_by_label = {r.label: r.signs for r in remote}
    return [b.label for b in bundled if b.label in remote_by_label and remote_by_label[b.label] != b.signs]
