# -*- coding: utf-8 -*-
"""
Оценки ненулевого центрального значения: суммы Клостермана, J₁,
частичные суммы S_Q(c), их оценки и итоговая правая часть ошибки.

Всё в двойной точности; ``high_precision=True`` пересчитывает через mpmath
с 100 битами мантиссы.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import gcd
from typing import Optional, Tuple

import mpmath
from loguru import logger

from .arith import euler_phi, is_hall_divisor, tau
from .errors import InvalidInputError

EXCEPTIONAL_PRIMES = (2, 3, 5, 7, 13)
PUBLISHED_THRESHOLDS = {2: 1700, 3: 1100, 5: 600, 7: 450, 13: 250}

WEIL_CONSTANT = 6.9  # ζ(3/2)² ≤ 6.9
POLYA_CONSTANT = 5.7
MIN_Q = 36
HIGH_PRECISION_BITS = 100
J1_MAX_ARG = 50.0


def kloosterman(m: int, n: int, c: int) -> float:
    """S(m, n; c) = Σ_{x mod c, (x,c)=1} e((m·x + n·x̄)/c); S(·,·;1) = 1."""
    if c < 1:
        raise InvalidInputError(f"модуль суммы Клостермана должен быть ≥ 1, получено {c}")
    if c == 1:
        return 1.0
    total = 0.0
    for x in range(1, c):
        if gcd(x, c) != 1:
            continue
        e = (m * x + n * pow(x, -1, c)) % c
        total += math.cos(2 * math.pi * e / c)
    # мнимая часть сокращается: x -> -x переводит слагаемое в сопряжённое
    return total


def weil_bound(m: int, n: int, c: int) -> float:
    """gcd(m, n, c)^{1/2}·τ(c)·√c."""
    return math.sqrt(gcd(gcd(m, n), c)) * tau(c) * math.sqrt(c)


def bessel_j1_with_error(x: float) -> Tuple[float, float]:
    """Ряд J₁(x) = Σ (-1)^k (x/2)^{2k+1} / (k!(k+1)!) и оценка отброшенного хвоста."""
    if abs(x) > J1_MAX_ARG:
        raise InvalidInputError(f"|x| = {abs(x)} > {J1_MAX_ARG}: ряд для J₁ не используется")
    if x == 0:
        return 0.0, 0.0
    with mpmath.workdps(20 + int(abs(x))):
        h = mpmath.mpf(x) / 2
        term = h
        total = term
        k = 0
        while True:
            term = -term * h * h / ((k + 1) * (k + 2))
            k += 1
            total += term
            # после пика слагаемые убывают, остаток знакочередующегося ряда ≤ |следующего|
            if k > abs(x) and abs(term) < mpmath.mpf(10) ** (-18) * max(1, abs(total)):
                nxt = abs(term * h * h / ((k + 1) * (k + 2)))
                return float(total), float(nxt)


def bessel_j1(x: float) -> float:
    return bessel_j1_with_error(x)[0]


def _check_sq(M: int, Q: int, c: int) -> None:
    if not is_hall_divisor(Q, M):
        raise InvalidInputError(f"{Q} не является делителем Холла {M}")
    if c < 1 or c % (M // Q):
        raise InvalidInputError(f"c = {c} должно быть кратно M/Q = {M // Q}")
    if gcd(Q, c) != 1:
        raise InvalidInputError(f"gcd(Q, c) = {gcd(Q, c)} ≠ 1")


def sq_partial(M: int, Q: int, c: int, tol: float = 1e-12) -> float:
    """Частичная сумма S_Q(c); обрывается, когда хвост по |J₁(x)| ≤ |x|/2 меньше tol."""
    _check_sq(M, Q, c)
    r = math.exp(-2 * math.pi / math.sqrt(M))
    q_inv = pow(Q, -1, c) if c > 1 else 0
    # |слагаемое n| ≤ r^n·φ(c)·2π/(c²√Q)
    const = euler_phi(c) * 2 * math.pi / (c * c * math.sqrt(Q))
    total = 0.0
    n = 0
    while True:
        n += 1
        arg = 4 * math.pi * math.sqrt(n) / (c * math.sqrt(Q))
        total += r ** n * kloosterman(1, (n * q_inv) % c, c) / math.sqrt(n) * bessel_j1(arg) / c
        tail = const * r ** (n + 1) / (1 - r)
        if tail < tol:
            return total


def sq_bound(M: int, Q: int, c: int) -> float:
    """min(τ(c)√M/(c^{3/2}√Q), 5.7/(c√Q)·(log c + 1.5))."""
    _check_sq(M, Q, c)
    weil = tau(c) * math.sqrt(M) / (c ** 1.5 * math.sqrt(Q))
    polya = POLYA_CONSTANT / (c * math.sqrt(Q)) * (math.log(c) + 1.5)
    return min(weil, polya)


@dataclass(frozen=True)
class BoundBreakdown:
    p: int
    q: int
    leading: float
    weil_block: float
    f1: float
    f2: float
    total: float
    high_precision: bool = False

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "leading": self.leading,
            "weil_block": self.weil_block,
            "f1": self.f1,
            "f2": self.f2,
            "total": self.total,
            "high_precision": self.high_precision,
        }


def _terms(p: int, q: int, lib):
    pq = lib.mpf(p) * q if lib is mpmath else float(p * q)
    leading = 1 - lib.exp(-2 * lib.pi / lib.sqrt(pq))
    weil = WEIL_CONSTANT * (4 / pq + 2 / (q * lib.sqrt(p)))
    L = lib.log(q / lib.mpf(36) if lib is mpmath else q / 36)
    f1 = (POLYA_CONSTANT * (lib.log(p) + 1.5) * (L + 1) + (1 + L * L) / 2) / pq + 12 * (2 * L + 8) / pq
    L2 = lib.log(pq / 36)
    f2 = (POLYA_CONSTANT * 1.5 * (L2 + 1) + (1 + L2 * L2) / 2) / pq + 6 * (2 * L2 + 8) / pq
    total = leading + 2 * lib.pi * (weil + f1 + f2)
    return leading, weil, f1, f2, total


def error_bound(p: int, q: int, high_precision: bool = False) -> BoundBreakdown:
    """Правая часть: (1 - e^{-2π/√(pq)}) + 2π·(6.9(4/(pq) + 2/(q√p)) + f₁(q) + f₂(q))."""
    if p not in EXCEPTIONAL_PRIMES:
        raise InvalidInputError(f"p = {p} не из {EXCEPTIONAL_PRIMES}")
    if q <= MIN_Q:
        raise InvalidInputError(f"оценка верна только при q > {MIN_Q}, получено {q}")
    if high_precision:
        with mpmath.workprec(HIGH_PRECISION_BITS):
            parts = _terms(p, q, mpmath)
            parts = tuple(float(v) for v in parts)
    else:
        parts = _terms(p, q, math)
    return BoundBreakdown(p, q, *parts, high_precision=high_precision)


@dataclass(frozen=True)
class ThresholdResult:
    p: int
    q0: int
    total_at_q0: float
    decreasing_certified: bool
    published_threshold: int
    high_precision_total: Optional[float] = None

    @property
    def within_published(self) -> bool:
        return self.q0 <= self.published_threshold + 1

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "q0": self.q0,
            "total_at_q0": self.total_at_q0,
            "decreasing_certified": self.decreasing_certified,
            "published_threshold": self.published_threshold,
            "high_precision_total": self.high_precision_total,
        }


def is_decreasing(p: int, start: int, stop: int) -> bool:
    """total(p, q) > total(p, q+1) на целых q ∈ [start, stop)."""
    prev = error_bound(p, start).total
    for q in range(start + 1, stop + 1):
        cur = error_bound(p, q).total
        if not cur < prev:
            logger.warning("p={}: оценка не убывает между {} и {}", p, q - 1, q)
            return False
        prev = cur
    return True


def threshold(p: int, verify_high_precision: bool = True) -> ThresholdResult:
    """Наименьшее целое q₀ ≥ 37 с total < 1 (бисекция по убывающей функции)."""
    lo = MIN_Q + 1
    if error_bound(p, lo).total < 1:
        hi = lo
    else:
        hi = lo * 2
        while error_bound(p, hi).total >= 1:
            hi *= 2
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if error_bound(p, mid).total < 1:
                hi = mid
            else:
                lo = mid
    q0 = hi
    certified = is_decreasing(p, MIN_Q + 1, q0)
    hp = error_bound(p, q0, high_precision=True).total if verify_high_precision else None
    result = ThresholdResult(p, q0, error_bound(p, q0).total, certified, PUBLISHED_THRESHOLDS[p], hp)
    logger.debug("порог для p={}: q₀ = {}", p, q0)
    return result
