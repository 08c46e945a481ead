# -*- coding: utf-8 -*-
"""
Целочисленная арифметика: разложение на множители, делители Холла,
символ Кронекера и отношение «квадрат ниже».

Все функции принимают ``int`` или уже разложенный ``FactoredInteger``.
Разложение кэшируется (lru_cache безопасен для параллельного чтения).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd, isqrt
from typing import Iterable, List, Set, Tuple, Union

from sympy import divisor_count, factorint, isprime, jacobi_symbol, totient

from .errors import InvalidInputError


@dataclass(frozen=True)
class FactoredInteger:
    """Положительное целое вместе с разложением ((p, e), ...) по возрастанию p."""
    value: int
    factors: Tuple[Tuple[int, int], ...]

    def __post_init__(self):
        prod = 1
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise InvalidInputError(f"неверное разложение {self.factors}")
            prod *= p ** e
            last = p
        if prod != self.value:
            raise InvalidInputError(f"разложение {self.factors} не даёт {self.value}")

    def __int__(self) -> int:
        return self.value

    @property
    def primes(self) -> Tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def omega(self) -> int:
        return len(self.factors)

    def valuation(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0

    @property
    def radical(self) -> int:
        r = 1
        for p, _ in self.factors:
            r *= p
        return r

    @property
    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.factors)

    @property
    def is_prime_power(self) -> bool:
        return len(self.factors) == 1

    def prime_powers(self) -> List[Tuple[int, int, int]]:
        """[(p, e, p^e), ...]"""
        return [(p, e, p ** e) for p, e in self.factors]


Intlike = Union[int, FactoredInteger]


@lru_cache(maxsize=65536)
def _factor_cached(n: int) -> FactoredInteger:
    fac = factorint(n)
    return FactoredInteger(n, tuple(sorted((int(p), int(e)) for p, e in fac.items())))


def factorize(n: Intlike) -> FactoredInteger:
    """Разложение n ≥ 1; 1 даёт пустое разложение."""
    if isinstance(n, FactoredInteger):
        return n
    if isinstance(n, bool) or not isinstance(n, int):
        raise InvalidInputError(f"ожидалось целое, получено {n!r}")
    if n < 1:
        raise InvalidInputError(f"factorize: нужно n ≥ 1, получено {n}")
    return _factor_cached(n)


def valuation(n: int, p: int) -> int:
    """v_p(n) для n ≠ 0."""
    if n == 0:
        raise InvalidInputError("v_p(0) не определена")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def divisors(n: Intlike) -> List[int]:
    f = factorize(n)
    out = [1]
    for p, e in f.factors:
        out = [d * p ** k for d in out for k in range(e + 1)]
    return sorted(out)


def hall_divisors(n: Intlike) -> List[int]:
    """Все Q | n с gcd(Q, n/Q) = 1; ровно 2^ω(n) штук, по возрастанию."""
    f = factorize(n)
    out = [1]
    for _, _, pe in f.prime_powers():
        out = out + [d * pe for d in out]
    return sorted(out)


def is_hall_divisor(q: int, n: int) -> bool:
    return q >= 1 and n % q == 0 and gcd(q, n // q) == 1


def kronecker(a: int, n: int) -> int:
    """Символ Кронекера (a/n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    v2 = 0
    while n % 2 == 0:
        n //= 2
        v2 += 1
    if v2:
        if a % 2 == 0:
            return 0
        if v2 % 2 == 1 and a % 8 in (3, 5):
            result = -result
    if n == 1:
        return result
    return result * int(jacobi_symbol(a % n, n))


def euler_phi(n: int) -> int:
    return int(totient(n))


def tau(n: int) -> int:
    return int(divisor_count(n))


def radical(n: Intlike) -> int:
    return factorize(n).radical


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def is_prime(p: int) -> bool:
    return bool(isprime(p))


def square_divisors(n: Intlike) -> List[int]:
    """Все s ≥ 1 с s² | n."""
    f = factorize(n)
    choices = [[p ** j for j in range(e // 2 + 1)] for p, e in f.factors]
    out = []
    for combo in product(*choices):
        s = 1
        for x in combo:
            s *= x
        out.append(s)
    return sorted(out)


def powerful_prime(m: Intlike):
    """Мощное простое для почти бесквадратного m (или p^2, p^3), иначе None."""
    f = factorize(m)
    big = [(p, e) for p, e in f.factors if e >= 2]
    if len(big) != 1:
        return None
    p, e = big[0]
    if e not in (2, 3):
        return None
    return p


def square_below_descents(n: Intlike) -> Set[Tuple[FactoredInteger, int]]:
    """
    Пары (M, p): M | N, N/M - квадрат, M почти бесквадратно (p^k·q1⋯qs, k ∈ {2,3})
    или M = p^k с k ∈ {2,3}. Сам N тоже проверяется (s = 1).
    """
    f = factorize(n)
    if f.value < 2:
        raise InvalidInputError("square_below_descents: нужно N ≥ 2")
    out: Set[Tuple[FactoredInteger, int]] = set()
    for s in square_divisors(f):
        m = f.value // (s * s)
        p = powerful_prime(m)
        if p is not None:
            out.add((factorize(m), p))
    return out


def satisfies_half_valuation(n: Intlike, m: Intlike) -> bool:
    """(HV): v_p(M) ≤ ⌈v_p(N)/2⌉ для всех p | N. Требует M | N, M < N."""
    nf, mf = factorize(n), factorize(m)
    if nf.value % mf.value != 0 or mf.value == nf.value:
        raise InvalidInputError(f"(HV) требует M | N и M < N, получено N={nf.value}, M={mf.value}")
    return all(mf.valuation(p) <= (e + 1) // 2 for p, e in nf.factors)


def lcm_all(values: Iterable[int]) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out
