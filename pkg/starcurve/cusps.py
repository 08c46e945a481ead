# -*- coding: utf-8 -*-
"""
Каспы X₀(N): представители, ширины, орбиты Галуа, действие Аткина-Лехнера,
рациональные каспы на X₀(N)* и разветвление отображений вырождения.

Касп a/b (b | N) задаётся инвариантом (d, a·(b/d) mod gcd(d, N/d)),
d = gcd(b, N). Образы под w_Q сравниваются только по этому инварианту.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, List, Tuple

from loguru import logger
try:
    from sympy import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from .arith import (
    divisors,
    factorize,
    hall_divisors,
    is_hall_divisor,
    satisfies_half_valuation,
    valuation,
)
from .errors import IntegralityError, InvalidInputError


@dataclass(frozen=True)
class Cusp:
    """Касп a/b уровня N; a взято из системы представителей ℛ_{N,b}."""
    level: int
    a: int
    b: int
    width: int

    @property
    def key(self) -> Tuple[int, int]:
        return cusp_key(self.level, self.a, self.b)

    @property
    def is_infinity(self) -> bool:
        return self.b == self.level

    def __str__(self) -> str:
        return f"{self.a}/{self.b}"


@dataclass(frozen=True)
class StarCuspClass:
    """Орбита W(N)×Gal на каспах; rational - образ на X₀(N)* рационален."""
    level: int
    members: Tuple[Cusp, ...]
    rational: bool
    field_label: str

    def __contains__(self, c: Cusp) -> bool:
        return c in self.members

    def __str__(self) -> str:
        names = ", ".join(str(c) for c in self.members)
        return f"[{names}]"


def cusp_key(N: int, a: int, b: int) -> Tuple[int, int]:
    """Инвариант класса каспа a/b относительно Γ₀(N)."""
    if b == 0:
        a, b = 1, N
    if b < 0:
        a, b = -a, -b
    if gcd(a, b) != 1:
        g = gcd(a, b)
        a, b = a // g, b // g
    d = gcd(b, N)
    g = gcd(d, N // d)
    return (d, (a * (b // d)) % g if g > 1 else 0)


def _width(N: int, b: int) -> int:
    return N // gcd(N, b * b)


def _field_label(g: int) -> str:
    if g in (1, 2):
        return "Q"
    if g == 4:
        return "Q(i)"
    if g in (3, 6):
        return "Q(zeta3)"
    if g % 4 == 2:
        g //= 2
    return f"Q(zeta{g})"


@lru_cache(maxsize=2048)
def cusp_representatives(N: int) -> Tuple[Cusp, ...]:
    """Σ_{b|N} φ(gcd(b, N/b)) каспов; числители взаимно просты с N."""
    if N < 1:
        raise InvalidInputError(f"уровень должен быть ≥ 1, получено {N}")
    out: List[Cusp] = []
    for b in divisors(N):
        g = gcd(b, N // b)
        for r in range(g):
            if gcd(r, g) != 1:
                continue
            a = r if r > 0 else g
            while gcd(a, N) != 1:
                a += g
            out.append(Cusp(N, a, b, _width(N, b)))
    return tuple(out)


@lru_cache(maxsize=2048)
def _cusp_index(N: int) -> Dict[Tuple[int, int], Cusp]:
    return {c.key: c for c in cusp_representatives(N)}


def find_cusp(N: int, a: int, b: int) -> Cusp:
    """Представитель класса каспа a/b."""
    try:
        return _cusp_index(N)[cusp_key(N, a, b)]
    except KeyError:
        raise InvalidInputError(f"{a}/{b} не определяет касп уровня {N}") from None


def infinity(N: int) -> Cusp:
    return find_cusp(N, 1, N)


def galois_orbits(N: int) -> Dict[int, Tuple[Cusp, ...]]:
    """Орбиты Галуа: ровно τ(N) штук, по знаменателю b."""
    out: Dict[int, List[Cusp]] = {}
    for c in cusp_representatives(N):
        out.setdefault(c.b, []).append(c)
    return {b: tuple(cs) for b, cs in out.items()}


def al_matrix(N: int, Q: int) -> Tuple[Tuple[int, int], Tuple[int, int]]:
    """[[Q, y], [N, Q·w]] с Qw - (N/Q)y = 1, определитель Q."""
    if not is_hall_divisor(Q, N):
        raise InvalidInputError(f"{Q} не является делителем Холла {N}")
    x, y, g = igcdex(Q, N // Q)
    # Q·x + (N/Q)·y = 1  =>  w = x, y -> -y
    return ((Q, -int(y)), (N, Q * int(x)))


def al_on_cusp(N: int, Q: int, c: Cusp) -> Cusp:
    """w_Q(c), приведённый в систему представителей."""
    if not is_hall_divisor(Q, N):
        raise InvalidInputError(f"{Q} не является делителем Холла {N}")
    if Q == 1:
        return c
    (p, q), (r, s) = al_matrix(N, Q)
    num = p * c.a + q * c.b
    den = r * c.a + s * c.b
    if num == 0:
        return find_cusp(N, 0, 1)
    g = gcd(num, den)
    return find_cusp(N, num // g, den // g)


def _al_generators(N: int) -> List[int]:
    return [pe for _, _, pe in factorize(N).prime_powers()]


def _w_orbit(N: int, c: Cusp) -> set:
    seen = {c}
    stack = [c]
    gens = _al_generators(N)
    while stack:
        cur = stack.pop()
        for Q in gens:
            img = al_on_cusp(N, Q, cur)
            if img not in seen:
                seen.add(img)
                stack.append(img)
    return seen


@lru_cache(maxsize=1024)
def star_cusp_orbits(N: int) -> Tuple[StarCuspClass, ...]:
    """Классы W(N)×Gal; их число ∏ ⌈(v_p(N)+1)/2⌉."""
    cusps = cusp_representatives(N)
    parent = {c: c for c in cusps}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[ry] = rx

    for c in cusps:
        for Q in _al_generators(N):
            union(c, al_on_cusp(N, Q, c))
    for orbit in galois_orbits(N).values():
        for c in orbit[1:]:
            union(orbit[0], c)

    groups: Dict[Cusp, List[Cusp]] = {}
    for c in cusps:
        groups.setdefault(find(c), []).append(c)

    classes = []
    for members in groups.values():
        members.sort(key=lambda c: (-c.b, c.a))
        w_orbit = _w_orbit(N, members[0])
        rational = w_orbit == set(members)
        g = min(gcd(c.b, N // c.b) for c in members)
        classes.append(StarCuspClass(N, tuple(members), rational, _field_label(g)))
    classes.sort(key=lambda k: (-k.members[0].b, k.members[0].a))
    return tuple(classes)


def class_of(N: int, c: Cusp) -> StarCuspClass:
    for k in star_cusp_orbits(N):
        if c in k:
            return k
    raise InvalidInputError(f"касп {c} не найден на уровне {N}")


def rational_star_cusp_denominators(N: int) -> List[int]:
    """Таблица шести случаев: ∞, 1/2, 1/3, 1/4, 1/6, 1/12."""
    v2, v3 = valuation(N, 2), valuation(N, 3)
    out = [N]
    if v2 >= 2:
        out.append(2)
    if v3 == 2:
        out.append(3)
    if v2 == 4:
        out.append(4)
    if v2 >= 2 and v3 == 2:
        out.append(6)
    if v2 == 4 and v3 == 2:
        out.append(12)
    return out


def rational_star_cusps(N: int) -> List[StarCuspClass]:
    out: List[StarCuspClass] = []
    for b in rational_star_cusp_denominators(N):
        k = class_of(N, find_cusp(N, 1, b))
        if not k.rational:
            logger.warning("уровень {}: класс 1/{} не прошёл проверку W ⊇ Gal", N, b)
        if k not in out:
            out.append(k)
    return out


def width_one_transport(N: int, c: Cusp) -> int:
    """Делитель Холла Q с шириной w_Q(c) = 1: простые, где 2·v_p(b) < v_p(N)."""
    Q = 1
    for p, e, pe in factorize(N).prime_powers():
        if 2 * valuation(c.b, p) < e:
            Q *= pe
    return Q


def _check_width_one(c: Cusp) -> None:
    if c.width != 1:
        raise InvalidInputError(f"касп {c} уровня {c.level} имеет ширину {c.width}, нужна 1")


def degeneracy_unramified(N: int, M: int, d: int, c: Cusp) -> bool:
    """i_{N,M}^{(d)} неразветвлено в c: d ‖ N/M и v_p(b) = v_p(N)/2 для p | d."""
    _check_width_one(c)
    if N % M:
        raise InvalidInputError(f"{M} не делит {N}")
    if (N // M) % d:
        raise InvalidInputError(f"{d} не делит N/M = {N // M}")
    if d == 1:
        return True
    if not is_hall_divisor(d, N // M):
        return False
    for p in factorize(d).primes:
        if 2 * valuation(c.b, p) != valuation(N, p):
            return False
    return True


def unramified_hall_set(N: int, M: int, c: Cusp) -> List[int]:
    """ℛ_c: делители Холла d числа N/M, неразветвлённые в c; всегда содержит 1."""
    if N % M or M == N or not satisfies_half_valuation(N, M):
        raise IntegralityError(f"(HV) нарушено для N={N}, M={M}")
    return [d for d in hall_divisors(N // M) if degeneracy_unramified(N, M, d, c)]


def width_one_cusps(N: int) -> List[Cusp]:
    return [c for c in cusp_representatives(N) if c.width == 1]
