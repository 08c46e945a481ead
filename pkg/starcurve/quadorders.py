# -*- coding: utf-8 -*-
"""
Порядки мнимых квадратичных полей O = Z[α] и их допустимые идеалы.

Допустимый идеал нормы p^k записывается как (p^k, λ - α), где
P_O(λ) ≡ 0 mod p^k (и точное равенство v_p(P_O(λ)) = k, если p | D).
Идеал нормы n хранится покомпонентно: ((p, k, λ_p), ...). Такое хранение
делает извлечение части Холла и сопряжение покомпонентными операциями.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from typing import FrozenSet, List, Tuple

from sympy.ntheory.modular import crt

from .arith import factorize, is_hall_divisor
from .errors import DiscriminantError, IdealError


@dataclass(frozen=True)
class ImagQuadOrder:
    """Порядок дискриминанта D = c²·D_K; P_O = X² - tX + m."""
    D: int
    D_K: int
    c: int
    trace: int
    norm_const: int

    @property
    def poly(self) -> Tuple[int, int, int]:
        """Коэффициенты P_O: (1, -t, m)."""
        return (1, -self.trace, self.norm_const)

    def poly_value(self, x: int) -> int:
        return x * x - self.trace * x + self.norm_const

    @property
    def is_maximal(self) -> bool:
        return self.c == 1

    def __str__(self) -> str:
        return f"O(D={self.D})"


def squarefree_part(n: int) -> int:
    out = 1
    for p, e in factorize(n).factors:
        if e % 2:
            out *= p
    return out


def fundamental_discriminant(D: int) -> int:
    """Фундаментальный дискриминант поля Q(√D)."""
    d0 = squarefree_part(-D)
    return -d0 if (-d0) % 4 == 1 else -4 * d0


@lru_cache(maxsize=4096)
def order_from_disc(D: int) -> ImagQuadOrder:
    if not isinstance(D, int) or D >= 0 or D % 4 not in (0, 1):
        raise DiscriminantError(f"недопустимый дискриминант {D}")
    D_K = fundamental_discriminant(D)
    c = isqrt(D // D_K)
    if c * c * D_K != D:
        raise DiscriminantError(f"D = {D} не имеет вид c²·D_K")
    if D_K % 4 == 0:
        return ImagQuadOrder(D, D_K, c, 0, -D // 4)
    return ImagQuadOrder(D, D_K, c, c, c * c * (1 - D_K) // 4)


@lru_cache(maxsize=16384)
def admissible_primepower(O: ImagQuadOrder, p: int, k: int) -> FrozenSet[int]:
    """λ mod p^k, задающие обратимые идеалы (p^k, λ - α) с циклическим фактором."""
    if k < 1:
        return frozenset({0})
    pk = p ** k
    out = set()
    ramified = O.D % p == 0
    for lam in range(pk):
        value = O.poly_value(lam)
        if value % pk:
            continue
        if ramified and value % (pk * p) == 0:
            continue
        # примитивность формы (p^k, 2λ - t, P(λ)/p^k) = обратимость
        if (2 * lam - O.trace) % p == 0 and (value // pk) % p == 0:
            continue
        out.add(lam)
    return frozenset(out)


@dataclass(frozen=True)
class OrderIdeal:
    """Идеал (n, λ - α) порядка O, компоненты ((p, k, λ_p), ...) по возрастанию p."""
    order: ImagQuadOrder
    components: Tuple[Tuple[int, int, int], ...]

    @property
    def norm(self) -> int:
        n = 1
        for p, k, _ in self.components:
            n *= p ** k
        return n

    @property
    def lam(self) -> int:
        if not self.components:
            return 0
        mods = [p ** k for p, k, _ in self.components]
        res = [l for _, _, l in self.components]
        value, _ = crt(mods, res)
        return int(value)

    def conjugate(self) -> "OrderIdeal":
        return conjugate_ideal(self)

    @property
    def is_self_conjugate(self) -> bool:
        return conjugate_ideal(self) == self

    def combine(self, other: "OrderIdeal") -> "OrderIdeal":
        """Произведение идеалов взаимно простых норм."""
        if other.order != self.order:
            raise IdealError("идеалы разных порядков")
        if gcd(self.norm, other.norm) != 1:
            raise IdealError(f"нормы {self.norm} и {other.norm} не взаимно просты")
        return OrderIdeal(self.order, tuple(sorted(self.components + other.components)))

    def __str__(self) -> str:
        return f"({self.norm}, {self.lam} - α)"


def unit_ideal(O: ImagQuadOrder) -> OrderIdeal:
    return OrderIdeal(O, ())


def admissible_ideals(O: ImagQuadOrder, n: int) -> List[OrderIdeal]:
    """Все допустимые идеалы нормы n; их число равно 𝒩_n(D)."""
    f = factorize(n)
    per_prime = []
    for p, k in f.factors:
        lams = sorted(admissible_primepower(O, p, k))
        if not lams:
            return []
        per_prime.append([(p, k, l) for l in lams])
    out = [OrderIdeal(O, tuple(combo)) for combo in product(*per_prime)]
    out.sort(key=lambda I: I.lam)
    return out


def conjugate_ideal(I: OrderIdeal) -> OrderIdeal:
    """λ -> t - λ покомпонентно (сопряжённый корень P_O)."""
    t = I.order.trace
    comps = tuple((p, k, (t - l) % p ** k) for p, k, l in I.components)
    return OrderIdeal(I.order, comps)


def eta_hall_part(I: OrderIdeal, Q: int) -> Tuple[OrderIdeal, OrderIdeal]:
    """(η_Q, η_{N/Q}) по простым носителям Q."""
    N = I.norm
    if not is_hall_divisor(Q, N):
        raise IdealError(f"{Q} не является делителем Холла нормы {N}")
    part_q = tuple(comp for comp in I.components if Q % comp[0] == 0)
    rest = tuple(comp for comp in I.components if Q % comp[0] != 0)
    return OrderIdeal(I.order, part_q), OrderIdeal(I.order, rest)
