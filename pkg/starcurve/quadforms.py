# -*- coding: utf-8 -*-
"""
Бинарные квадратичные формы отрицательного дискриминанта.

Приведение, композиция Гаусса (формула объединённых форм), группы классов
форм и словарь «идеал -> форма» для порядков мнимых квадратичных полей.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from math import gcd, isqrt
from typing import TYPE_CHECKING, Dict, List, Tuple

from loguru import logger
try:
    from sympy import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from .errors import DiscriminantError, FormError, IdealError

if TYPE_CHECKING:
    from .quadorders import ImagQuadOrder, OrderIdeal


@dataclass(frozen=True)
class QuadraticForm:
    """Положительно определённая примитивная форма ax² + bxy + cy²."""
    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.b * self.b - 4 * self.a * self.c >= 0 or self.a <= 0:
            raise FormError(f"форма {self.as_tuple()} не положительно определена")
        if gcd(gcd(self.a, self.b), self.c) != 1:
            raise FormError(f"форма {self.as_tuple()} непримитивна")

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def as_tuple(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    """(g, x, y): a·x + b·y = g ≥ 0."""
    x, y, g = igcdex(a, b)
    x, y, g = int(x), int(y), int(g)
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


def _check_disc(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise DiscriminantError(f"недопустимый дискриминант {D}")


def reduce_form(f: QuadraticForm) -> QuadraticForm:
    """Единственная приведённая форма в классе f."""
    a, b, c = f.a, f.b, f.c
    D = f.discriminant
    while True:
        if not (-a < b <= a):
            k = (a - b) // (2 * a)
            b += 2 * a * k
            c = (b * b - D) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        break
    return QuadraticForm(a, b, c)


def compose(f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
    """Приведённый представитель композиции Гаусса f∘g."""
    D = f.discriminant
    if g.discriminant != D:
        raise DiscriminantError(f"дискриминанты не совпадают: {D} и {g.discriminant}")
    a1, b1 = f.a, f.b
    a2, b2 = g.a, g.b
    s = (b1 + b2) // 2
    g1, u, v = _xgcd(a1, a2)
    e, w, z = _xgcd(g1, s)
    x, y = u * w, v * w
    A = a1 * a2 // (e * e)
    num = a1 * b2 * x + a2 * b1 * y + z * ((b1 * b2 + D) // 2)
    if num % e:
        raise FormError(f"композиция {f}∘{g}: нецелый коэффициент")
    B = (num // e) % (2 * A)
    C = (B * B - D) // (4 * A)
    return reduce_form(QuadraticForm(A, B, C))


def principal_form(D: int) -> QuadraticForm:
    _check_disc(D)
    if D % 4 == 0:
        return QuadraticForm(1, 0, -D // 4)
    return QuadraticForm(1, 1, (1 - D) // 4)


def inverse_form(f: QuadraticForm) -> QuadraticForm:
    return reduce_form(QuadraticForm(f.a, -f.b, f.c))


@dataclass(frozen=True)
class FormClassGroup:
    """Группа классов приведённых форм дискриминанта D (изоморфна Pic(O))."""
    discriminant: int
    elements: Tuple[QuadraticForm, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def identity(self) -> QuadraticForm:
        return principal_form(self.discriminant)

    @cached_property
    def identity_index(self) -> int:
        return self.index(self.identity)

    @cached_property
    def _positions(self) -> Dict[QuadraticForm, int]:
        return {f: i for i, f in enumerate(self.elements)}

    def index(self, f: QuadraticForm) -> int:
        if f.discriminant != self.discriminant:
            raise DiscriminantError(f"форма {f} не из группы дискриминанта {self.discriminant}")
        return self._positions[reduce_form(f)]

    @cached_property
    def table(self) -> Tuple[Tuple[int, ...], ...]:
        """table[i][j] = индекс elements[i]∘elements[j]."""
        return tuple(
            tuple(self.index(compose(f, g)) for g in self.elements) for f in self.elements
        )

    def mul(self, f: QuadraticForm, g: QuadraticForm) -> QuadraticForm:
        return self.elements[self.table[self.index(f)][self.index(g)]]

    def inverse(self, f: QuadraticForm) -> QuadraticForm:
        return inverse_form(f)

    def element_order(self, f: QuadraticForm) -> int:
        i = self.index(f)
        k, cur = 1, i
        while cur != self.identity_index:
            cur = self.table[cur][i]
            k += 1
        return k

    @cached_property
    def exponent(self) -> int:
        out = 1
        for f in self.elements:
            k = self.element_order(f)
            out = out * k // gcd(out, k)
        return out

    @property
    def is_two_torsion(self) -> bool:
        return self.exponent <= 2


@lru_cache(maxsize=4096)
def class_group(D: int) -> FormClassGroup:
    """Перебор приведённых примитивных форм: a ≤ √(|D|/3), |b| ≤ a ≤ c."""
    _check_disc(D)
    forms: List[QuadraticForm] = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if gcd(gcd(a, b), c) != 1:
                continue
            forms.append(QuadraticForm(a, b, c))
    forms.sort(key=lambda f: (f.a, abs(f.b), -f.b))
    logger.debug("class_group({}): h = {}", D, len(forms))
    return FormClassGroup(D, tuple(forms))


def class_number(D: int) -> int:
    return class_group(D).order


def is_principal(G: FormClassGroup, f: QuadraticForm) -> bool:
    if f.discriminant != G.discriminant:
        raise DiscriminantError(f"форма {f} не дискриминанта {G.discriminant}")
    return reduce_form(f) == G.identity


def ideal_to_form(O: "ImagQuadOrder", I: "OrderIdeal") -> QuadraticForm:
    """Идеал (n, λ - α) переходит в форму (n, 2λ - t, P(λ)/n)."""
    n, lam = I.norm, I.lam
    value = O.poly_value(lam)
    if value % n:
        raise IdealError(f"n = {n} не делит P({lam}) = {value}")
    a, b, c = n, 2 * lam - O.trace, value // n
    if gcd(gcd(a, b), c) != 1:
        raise IdealError(f"идеал ({n}, {lam} - α) необратим в порядке D = {O.D}")
    return QuadraticForm(a, b, c)


def two_torsion_discriminants(bound: int, max_order: int = 16) -> List[int]:
    """Все D, -bound ≤ D < 0, с Pic экспоненты ≤ 2 и h ≤ max_order."""
    out = []
    for D in range(-3, -bound - 1, -1):
        if D % 4 not in (0, 1):
            continue
        G = class_group(D)
        if G.order <= max_order and G.is_two_torsion:
            out.append(D)
    return out
