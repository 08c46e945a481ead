# -*- coding: utf-8 -*-
"""
Вулканы ℓ-изогений CM-кривых и подъём рациональных точек Хегнера.

Циклическая d-изогения раскладывается в цепочку шагов простой степени без
возвратов. Путь от D к D' считается по таблице isogeny_profile; ответ «да»
только если путь ровно один и все вершины на нём имеют число классов 1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from loguru import logger

from .arith import divisors, factorize, hall_divisors, is_prime, kronecker, valuation
from .errors import InvalidInputError
from .heegner import rational_heegner_report
from .quadforms import class_number
from .quadorders import ImagQuadOrder, order_from_disc

ASCENDING = "ascending"
HORIZONTAL = "horizontal"
DESCENDING = "descending"

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class IsogenyProfile:
    D: int
    ell: int
    ascending: int
    horizontal: int
    descending: int

    def count(self, direction: str) -> int:
        return {ASCENDING: self.ascending, HORIZONTAL: self.horizontal, DESCENDING: self.descending}[direction]


@dataclass(frozen=True)
class IsogenyStep:
    ell: int
    direction: str
    disc_after: int


@dataclass(frozen=True)
class IsogenyVerdict:
    verdict: str
    paths: int
    certificate: Tuple[IsogenyStep, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.verdict == YES


@dataclass(frozen=True)
class LiftEntry:
    level: int
    d: int
    M: int
    D: int
    D0: int
    certificate: Tuple[IsogenyStep, ...]

    def as_pair(self) -> Tuple[int, int]:
        return (self.D, self.D0)


def isogeny_profile(D: int, ell: int) -> IsogenyProfile:
    """ℓ | кондуктор: (1, 0, ℓ); иначе (0, 1 + (D/ℓ), 1 - (D/ℓ))."""
    if not is_prime(ell):
        raise InvalidInputError(f"{ell} не простое")
    O = order_from_disc(D)
    if O.c % ell == 0:
        return IsogenyProfile(D, ell, 1, 0, ell)
    chi = kronecker(D, ell)
    return IsogenyProfile(D, ell, 0, 1 + chi, 1 - chi)


def _disc_with(O: ImagQuadOrder, ell: int, v: int) -> int:
    base = O.c // ell ** valuation(O.c, ell)
    c = base * ell ** v
    return O.D_K * c * c


_DUAL = {ASCENDING: DESCENDING, DESCENDING: ASCENDING, HORIZONTAL: HORIZONTAL}
_SHIFT = {ASCENDING: -1, HORIZONTAL: 0, DESCENDING: 1}


def _walks(D: int, ell: int, steps: int, target_v: int):
    """Все пути длины steps без возвратов: [(вес, [IsogenyStep...])]."""
    out = []
    start_v = valuation(order_from_disc(D).c, ell)

    def go(disc: int, last: Optional[str], left: int, weight: int, path: List[IsogenyStep]):
        O = order_from_disc(disc)
        v = valuation(O.c, ell)
        if left == 0:
            if v == target_v:
                out.append((weight, tuple(path)))
            return
        prof = isogeny_profile(disc, ell)
        for direction in (ASCENDING, HORIZONTAL, DESCENDING):
            n = prof.count(direction)
            if last is not None and _DUAL[last] == direction:
                n -= 1
            if start_v and direction == DESCENDING and O.c % ell:
                # на поверхности, куда пришли подъёмом, спуски считаются по ядрам исходной кривой
                n = ell - kronecker(disc, ell) - (last == ASCENDING)
            if n <= 0:
                continue
            nxt = _disc_with(O, ell, v + _SHIFT[direction])
            go(nxt, direction, left - 1, weight * n, path + [IsogenyStep(ell, direction, nxt)])

    go(D, None, steps, 1, [])
    return out


def unique_cyclic_isogeny(D: int, D_target: int, d: int) -> IsogenyVerdict:
    """Единственна ли (с точностью до автоморфизмов) циклическая d-изогения E_D -> E_{D'}."""
    if d < 2:
        raise InvalidInputError(f"степень изогении должна быть ≥ 2, получено {d}")
    O, O1 = order_from_disc(D), order_from_disc(D_target)
    if O.D_K != O1.D_K:
        return IsogenyVerdict(NO, 0, reason=f"разные поля: {O.D_K} и {O1.D_K}")
    fd = factorize(d)
    for p in set(factorize(O.c).primes) | set(factorize(O1.c).primes):
        if d % p and valuation(O.c, p) != valuation(O1.c, p):
            return IsogenyVerdict(NO, 0, reason=f"v_{p} кондуктора меняется, а {p} ∤ {d}")

    total = 1
    clean = True
    certificate: List[IsogenyStep] = []
    disc = D
    for ell, e in fd.factors:
        target_v = valuation(O1.c, ell)
        walks = _walks(disc, ell, e, target_v)
        count = sum(w for w, _ in walks)
        total *= count
        if count == 0:
            return IsogenyVerdict(NO, 0, reason=f"нет пути степени {ell}^{e}")
        for _, path in walks:
            if any(class_number(s.disc_after) != 1 for s in path):
                clean = False
        if len(walks) == 1:
            certificate.extend(walks[0][1])
        disc = _disc_with(order_from_disc(disc), ell, target_v)

    if not clean:
        return IsogenyVerdict(UNKNOWN, total, reason="промежуточное число классов больше 1")
    if total == 1:
        return IsogenyVerdict(YES, 1, tuple(certificate))
    return IsogenyVerdict(NO, total, reason=f"путей {total}, а не 1")


@lru_cache(maxsize=1)
def class_number_one_discriminants(bound: int = 200) -> Tuple[int, ...]:
    """Дискриминанты D ≥ -bound с h(D) = 1, перебором форм."""
    out = []
    for D in range(-3, -bound - 1, -1):
        if D % 4 in (0, 1) and class_number(D) == 1:
            out.append(D)
    return tuple(out)


def _overorders(D: int) -> List[int]:
    """Дискриминанты порядков O₀ ⊋ O с h = 1."""
    O = order_from_disc(D)
    out = []
    for f0 in divisors(O.c):
        if f0 == O.c:
            continue
        D0 = O.D_K * f0 * f0
        if class_number(D0) == 1:
            out.append(D0)
    return out


def cm_lift_report(N: int) -> List[LiftEntry]:
    """Подъёмы D -> D0 по всем N = d·M, gcd(d, M) = 1, d > 1."""
    out: List[LiftEntry] = []
    seen = set()
    for d in hall_divisors(N):
        if d == 1:
            continue
        M = N // d
        for D in sorted(set(rational_heegner_report(M)), key=abs):
            O = order_from_disc(D)
            if O.is_maximal:
                continue
            for D0 in _overorders(D):
                verdict = unique_cyclic_isogeny(D, D0, d)
                if verdict.verdict != YES or (D, D0) in seen:
                    continue
                seen.add((D, D0))
                logger.debug("N={}: подъём {} -> {} через X₀({})*, d={}", N, D, D0, M, d)
                out.append(LiftEntry(N, d, M, D, D0, verdict.certificate))
    out.sort(key=lambda e: (abs(e.D), abs(e.D0)))
    return out
