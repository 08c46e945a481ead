# -*- coding: utf-8 -*-
"""
Исключительные простые, пары и тройки; предикат «исключительный уровень»,
классификация по пяти формам и минимальное семейство уровней.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, List, Optional, Sequence, Tuple

from loguru import logger

from .arith import (
    factorize,
    is_square,
    satisfies_half_valuation,
    square_below_descents,
)
from .errors import InvalidInputError


@dataclass(frozen=True)
class ExceptionalTables:
    primes: FrozenSet[int] = frozenset({2, 3, 5, 7, 13})
    pairs: FrozenSet[Tuple[int, int]] = frozenset(
        [(2, 3), (2, 5), (2, 7), (2, 11), (2, 23), (3, 2), (3, 5), (3, 11), (5, 2), (7, 3)]
    )
    triples: FrozenSet[Tuple[int, int, int]] = frozenset([(2, 3, 5), (2, 5, 3)])


TABLES = ExceptionalTables()

# добавочные степени простых: X₀(p^k)^+ положительного рода без фактора ранга 0
EXTRA_PRIME_POWERS = (125, 169)

# поправка ℒ₀ -> ℒ₁
L1_REMOVED = frozenset({99, 125, 169, 324, 1372})
L1_ADDED = frozenset({396, 500, 891})
DEFAULT_CAP = 1400

SHAPE_TRIPLES = ((2, 3, 5), (2, 3, 11), (2, 7, 3), (3, 5, 2))
SHAPE_POWERFUL = ((2, 3, 5), (5, 2, 3), (3, 2, 7))


@dataclass(frozen=True)
class LevelClassification:
    level: int
    exceptional: bool
    witness: str = ""
    shape: Optional[int] = None
    shape_params: Tuple[int, ...] = field(default_factory=tuple)

    def as_dict(self) -> dict:
        return {
            "level": self.level,
            "exceptional": self.exceptional,
            "witness": self.witness,
            "shape": self.shape,
            "shape_params": list(self.shape_params),
        }


def exceptional_tuple(p: int, rest: Sequence[int] = ()) -> bool:
    """(p, q₁, ..., q_s) по таблицам; кортежи длины ≥ 4 не бывают исключительными."""
    tup = (p,) + tuple(rest)
    if len(set(tup)) != len(tup):
        raise InvalidInputError(f"повторяющиеся простые в кортеже {tup}")
    if len(tup) == 1:
        return p in TABLES.primes
    if len(tup) == 2:
        return tup in TABLES.pairs
    if len(tup) == 3:
        return tup in TABLES.triples
    return False


def _subtuples(p: int, rest: Sequence[int]):
    for r in range(len(rest) + 1):
        for sub in combinations(rest, r):
            yield sub


def _check_level(N: int) -> None:
    f = factorize(N)
    if f.is_squarefree or f.is_prime_power:
        raise InvalidInputError(f"{N}: уровень должен быть не бесквадратным и не степенью простого")


def is_exceptional_level(N: int) -> LevelClassification:
    """Проверка определения; свидетель - первый провалившийся спуск."""
    _check_level(N)
    f = factorize(N)
    for p, e in f.factors:
        if e >= 2 and p not in TABLES.primes:
            return LevelClassification(N, False, f"{p}² | {N}, но {p} не исключительное")
    for M, p in sorted(square_below_descents(f), key=lambda t: (t[0].value, t[1])):
        rest = tuple(q for q in M.primes if q != p)
        for sub in _subtuples(p, rest):
            if not exceptional_tuple(p, sub):
                tup = ",".join(str(q) for q in (p,) + sub)
                return LevelClassification(N, False, f"спуск {M.value}: ({tup}) не исключителен")
    shape = shape_classify(N, strict=False)
    return LevelClassification(N, True, "", shape[0] if shape else None, shape[1] if shape else ())


def hv_check(N: int, M: int) -> bool:
    """(HV): v_p(M) ≤ ⌈v_p(N)/2⌉ для всех p | N."""
    return satisfies_half_valuation(N, M)


def _pair(p: int, q: int) -> bool:
    return (p, q) in TABLES.pairs


def shape_classify(N: int, strict: bool = True) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """
    Форма (1)-(5) и её параметры; формы проверяются в порядке (4), (1), (2), (3), (5).
    strict=True: для неисключительного уровня InvalidInputError, иначе None.
    """
    _check_level(N)
    f = factorize(N)
    big = [(p, e) for p, e in f.factors if e >= 2]
    single = [p for p, e in f.factors if e == 1]
    small = TABLES.primes

    result: Optional[Tuple[int, Tuple[int, ...]]] = None
    if all(e % 2 == 0 for _, e in f.factors) and all(p in small for p in f.primes):
        result = (4, tuple(p ** (e // 2) for p, e in f.factors))
    elif len(big) == 1 and single:
        p, e = big[0]
        Q = 1
        for q in single:
            Q *= q
        if (len(single) == 1 and _pair(p, single[0])) or (p == 2 and Q == 15):
            result = (1, (p, e, Q))
    elif len(big) == 2 and not single:
        (p1, l1), (p2, l2) = big
        if p1 in small and p2 in small:
            ok = (l1 % 2 == 0 or _pair(p2, p1)) and (l2 % 2 == 0 or _pair(p1, p2))
            if ok:
                result = (2, (p1, l1, p2, l2))
    elif len(big) == 2 and len(single) == 1:
        q = single[0]
        exps = dict(big)
        for p1, p2, q0 in SHAPE_TRIPLES:
            if q0 != q or set(exps) != {p1, p2}:
                continue
            l1, l2 = exps[p1], exps[p2]
            if l1 % 2:
                continue
            if (p1, p2, q0) != (2, 3, 5) and l2 % 2:
                continue
            result = (3, (p1, l1, p2, l2, q))
            break
    elif len(big) == 3 and not single:
        exps = dict(big)
        for p1, p2, p3 in SHAPE_POWERFUL:
            if set(exps) != {p1, p2, p3}:
                continue
            l1, l2, l3 = exps[p1], exps[p2], exps[p3]
            if l1 >= 3 and l1 % 2 and l2 % 2 == 0 and l3 % 2 == 0:
                result = (5, (p1, l1, p2, l2, p3, l3))
                break

    if result is None and strict:
        raise InvalidInputError(f"{N} не подходит ни под одну из пяти форм")
    return result


def square_above(a: int, b: int) -> bool:
    """a = b·s² с s > 1."""
    return a != b and a % b == 0 and is_square(a // b)


def exceptional_levels(bound: int) -> List[int]:
    """Все исключительные Ñ ≤ bound (не бесквадратные, не степени простого), без условия на род."""
    out = []
    for N in range(2, bound + 1):
        f = factorize(N)
        if f.is_squarefree or f.is_prime_power:
            continue
        if is_exceptional_level(N).exceptional:
            out.append(N)
    return out


def minimal_exceptional_family(cap: int = DEFAULT_CAP, genus_star_fn=None) -> List[int]:
    """Исключительные Ñ ≤ cap (и 5³, 13²) с g* > 0, без тех, что «квадрат над» другим членом."""
    if genus_star_fn is None:
        from .genus import genus_star as genus_star_fn
    candidates = exceptional_levels(cap)
    candidates += [n for n in EXTRA_PRIME_POWERS if n <= cap]
    positive = sorted(n for n in candidates if genus_star_fn(n) > 0)
    logger.debug("исключительных уровней ≤ {}: {}, с g* > 0: {}", cap, len(candidates), len(positive))
    out = [n for n in positive if not any(square_above(n, m) for m in positive)]
    return out


def adjusted_family(family: Sequence[int]) -> List[int]:
    """ℒ₁ = ℒ₀ без {99, 125, 169, 324, 1372} и с {396, 500, 891}."""
    return sorted((set(family) - L1_REMOVED) | L1_ADDED)
