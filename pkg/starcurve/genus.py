# -*- coding: utf-8 -*-
"""
Род X₀(N) и звёздного фактора X₀(N)* = X₀(N)/W(N).

Неподвижные точки w_Q считаются напрямую: CM-точки (E, C) с эндоморфизмом
φ степени Q, сохраняющим циклическую подгруппу порядка N/Q, плюс каспы,
которые w_Q оставляет на месте. Дальше формула Римана-Гурвица.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Sequence, Tuple

from loguru import logger

from .arith import factorize, hall_divisors, is_hall_divisor, kronecker
from .cusps import al_on_cusp, cusp_representatives
from .errors import GenusError, InvalidInputError
from .quadforms import class_number
from .quadorders import ImagQuadOrder, order_from_disc

Vec = Tuple[int, int]


@dataclass
class GenusData:
    N: int
    mu: int
    nu2: int
    nu3: int
    nu_inf: int
    genus: int
    fixed_points: Dict[int, int] = field(default_factory=dict)
    genus_star: int = 0

    def riemann_hurwitz_closes(self) -> bool:
        omega = factorize(self.N).omega
        lhs = 2 * self.genus - 2
        rhs = 2 ** omega * (2 * self.genus_star - 2) + sum(self.fixed_points.values())
        return lhs == rhs


def index_mu(N: int) -> int:
    out = Fraction(N)
    for p in factorize(N).primes:
        out *= Fraction(p + 1, p)
    return int(out)


def elliptic_counts(N: int) -> Tuple[int, int]:
    """(ν₂, ν₃): произведения 1 + (D/p), ноль при 4 | N и 9 | N соответственно."""
    primes = factorize(N).primes
    nu2 = 0
    if N % 4:
        nu2 = 1
        for p in primes:
            nu2 *= 1 + kronecker(-4, p)
    nu3 = 0
    if N % 9:
        nu3 = 1
        for p in primes:
            nu3 *= 1 + kronecker(-3, p)
    return nu2, nu3


def genus_X0(N: int) -> int:
    """g = 1 + μ/12 - ν₂/4 - ν₃/3 - ν∞/2."""
    if N < 1:
        raise InvalidInputError(f"уровень должен быть ≥ 1, получено {N}")
    nu2, nu3 = elliptic_counts(N)
    nu_inf = len(cusp_representatives(N))
    g = 1 + Fraction(index_mu(N), 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(nu_inf, 2)
    if g.denominator != 1 or g < 0:
        raise GenusError(f"род X₀({N}) получился {g}")
    return int(g)


# --- CM-часть неподвижных точек -------------------------------------------

def _cm_endomorphisms(Q: int) -> List[Tuple[ImagQuadOrder, Vec]]:
    """Пары (порядок, φ) с N(φ) = Q, φ² ∈ Q·O^× и циклическим ядром φ."""
    out = []
    O = order_from_disc(-4 * Q)
    out.append((O, (0, 1)))
    if Q % 4 == 3:
        O = order_from_disc(-Q)
        out.append((O, (-O.trace, 2)))
    if Q == 2:
        out.append((order_from_disc(-4), (1, 1)))
    return out


def _mul(O: ImagQuadOrder, phi: Vec, v: Vec, mod: int) -> Vec:
    """φ·v в базисе (1, ω), ω² = tω - n."""
    a0, b0 = phi
    x, y = v
    wx, wy = -O.norm_const * y, x + O.trace * y
    return ((a0 * x + b0 * wx) % mod, (a0 * y + b0 * wy) % mod)


def _lines(p: int, k: int) -> List[Vec]:
    pk = p ** k
    out = [(1, s) for s in range(pk)]
    out += [(p * s, 1) for s in range(p ** (k - 1))]
    return out


def _normalize(v: Vec, p: int, pk: int) -> Vec:
    x, y = v[0] % pk, v[1] % pk
    if x % p:
        return (1, y * pow(x, -1, pk) % pk)
    return (x * pow(y, -1, pk) % pk, 1)


def _is_stable(O: ImagQuadOrder, phi: Vec, line: Vec, p: int, pk: int) -> bool:
    a, b = _mul(O, phi, line, pk)
    if line[0] == 1:
        return (b - a * line[1]) % pk == 0
    return (a - b * line[0]) % pk == 0


def _stable_lines(O: ImagQuadOrder, phi: Vec, p: int, k: int) -> List[Vec]:
    pk = p ** k
    return [l for l in _lines(p, k) if _is_stable(O, phi, l, p, pk)]


def _cm_fixed(N: int, Q: int) -> int:
    rest = N // Q
    parts = factorize(rest).prime_powers()
    total = 0
    for O, phi in _cm_endomorphisms(Q):
        stable = [_stable_lines(O, phi, p, k) for p, k, _ in parts]
        if O.D in (-3, -4):
            # Aut(E)/±1 нетривиальна: считаем орбиты кортежей под ω
            seen = set()
            orbits = 0
            for tup in product(*stable):
                if tup in seen:
                    continue
                orbits += 1
                cur = tup
                while cur not in seen:
                    seen.add(cur)
                    cur = tuple(
                        _normalize(_mul(O, (0, 1), line, pk), p, pk)
                        for line, (p, _, pk) in zip(cur, parts)
                    )
            count = orbits
        else:
            count = class_number(O.D)
            for lines in stable:
                count *= len(lines)
        logger.debug("fix(w_{}) на X₀({}): D = {} даёт {}", Q, N, O.D, count)
        total += count
    return total


def _cusp_fixed(N: int, Q: int) -> int:
    return sum(1 for c in cusp_representatives(N) if al_on_cusp(N, Q, c) == c)


@lru_cache(maxsize=4096)
def al_fixed_points(N: int, Q: int) -> int:
    """Число неподвижных точек w_Q на X₀(N): CM-точки и каспы."""
    if Q == 1 or not is_hall_divisor(Q, N):
        raise InvalidInputError(f"Q = {Q} должен быть делителем Холла {N}, Q > 1")
    return _cm_fixed(N, Q) + _cusp_fixed(N, Q)


def classical_fixed_points(Q: int) -> int:
    """h(-4Q) + h(-Q) (если Q ≡ 3 mod 4): число неподвижных точек w_Q на X₀(Q), Q > 4."""
    if Q <= 4:
        raise InvalidInputError("классическая формула без поправок верна только при Q > 4")
    out = class_number(-4 * Q)
    if Q % 4 == 3:
        out += class_number(-Q)
    return out


def _genus_of_quotient(N: int, group: Sequence[int]) -> int:
    g = genus_X0(N)
    fix_total = sum(al_fixed_points(N, Q) for Q in group if Q > 1)
    lhs = 2 * g - 2 - fix_total
    order = len(group)
    if lhs % order:
        raise GenusError(f"Риман-Гурвиц для N={N}: {lhs} не делится на {order}")
    two_g = lhs // order + 2
    if two_g % 2 or two_g < 0:
        raise GenusError(f"Риман-Гурвиц для N={N}: 2g* = {two_g}")
    return two_g // 2


@lru_cache(maxsize=4096)
def genus_star(N: int) -> int:
    """Род X₀(N)* по всей группе W(N) ≅ (Z/2)^ω(N)."""
    if N < 1:
        raise InvalidInputError(f"уровень должен быть ≥ 1, получено {N}")
    return _genus_of_quotient(N, hall_divisors(N))


def _al_product(N: int, q1: int, q2: int) -> int:
    g = 1
    for p in factorize(N).primes:
        if (q1 % p == 0) != (q2 % p == 0):
            g *= p ** factorize(N).valuation(p)
    return g


def quotient_genus(N: int, qs: Iterable[int]) -> int:
    """Род X₀(N)/⟨w_Q : Q ∈ qs⟩. Вспомогательная функция, таблицами не сверяется."""
    group = {1}
    for Q in qs:
        if not is_hall_divisor(Q, N):
            raise InvalidInputError(f"{Q} не является делителем Холла {N}")
        group |= {_al_product(N, Q, h) for h in group}
    return _genus_of_quotient(N, sorted(group))


def genus_data(N: int) -> GenusData:
    nu2, nu3 = elliptic_counts(N)
    fixes = {Q: al_fixed_points(N, Q) for Q in hall_divisors(N) if Q > 1}
    data = GenusData(
        N=N,
        mu=index_mu(N),
        nu2=nu2,
        nu3=nu3,
        nu_inf=len(cusp_representatives(N)),
        genus=genus_X0(N),
        fixed_points=fixes,
        genus_star=genus_star(N),
    )
    if not data.riemann_hurwitz_closes():
        raise GenusError(f"баланс Римана-Гурвица не сходится для N={N}")
    return data
