# -*- coding: utf-8 -*-
"""
Точная арифметика в Z[ζ_L] и множители целостности m_{N,M}, m'_{N,M}.

Для каждого каспа c ширины 1 берётся сумма корней из единицы
S_c = Σ_{d ∈ ℛ_c} ε(w_{d_M})·ζ_{gcd(b,d)}; m_{N,M} - наименьшее целое,
делящееся на все S_c в Z[ζ]. Соглашения о выборе ζ_n:

* ``crt``       - ζ_n = ∏_{p^e ‖ n} ζ_L^{k_p·L/p^e}, k_p = 1 либо закреплённое значение
                  из ``root_exponents.tsv``;
* ``coherent``  - ζ_n = ζ_L^{L/n};
* ``exhaustive``- НОК по всем независимым выборам первообразных корней.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from loguru import logger
from sympy import Poly, QQ, ZZ, Rational, symbols

from .arith import divisors, euler_phi, factorize, lcm_all, radical, satisfies_half_valuation, valuation
from .cusps import Cusp, unramified_hall_set, width_one_cusps
from .errors import IntegralityError, InvalidInputError

x = symbols("x")

CONVENTIONS = ("coherent", "crt", "exhaustive")
MAX_EXHAUSTIVE = 4096

Twists = Mapping[int, Mapping[int, int]]


@lru_cache(maxsize=1024)
def cyclotomic_poly(n: int) -> Poly:
    """Φ_n: x^n - 1, поделённый на Φ_d для всех d | n, d < n."""
    if n < 1:
        raise InvalidInputError(f"cyclotomic_poly: нужно n ≥ 1, получено {n}")
    num = Poly(x ** n - 1, x, domain=ZZ)
    for d in divisors(n):
        if d < n:
            num = num.exquo(cyclotomic_poly(d))
    return num


@dataclass(frozen=True)
class CyclotomicElement:
    """Элемент Z[ζ_L]: коэффициенты при 1, ζ, ..., ζ^{φ(L)-1}."""
    L: int
    coeffs: Tuple[int, ...]

    @classmethod
    def from_terms(cls, L: int, terms: Mapping[int, int]) -> "CyclotomicElement":
        """Σ coeff·ζ_L^exp, приведённое по модулю Φ_L."""
        poly = Poly(sum(c * x ** (e % L) for e, c in terms.items()) + 0 * x, x, domain=ZZ)
        return cls.from_poly(L, poly)

    @classmethod
    def from_poly(cls, L: int, poly: Poly) -> "CyclotomicElement":
        rem = poly.rem(cyclotomic_poly(L))
        n = euler_phi(L)
        coeffs = [0] * n
        for (e,), c in rem.terms():
            coeffs[e] = int(c)
        return cls(L, tuple(coeffs))

    @classmethod
    def integer(cls, L: int, value: int) -> "CyclotomicElement":
        return cls.from_terms(L, {0: value})

    @property
    def poly(self) -> Poly:
        return Poly(sum(c * x ** i for i, c in enumerate(self.coeffs)) + 0 * x, x, domain=ZZ)

    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._same_ring(other)
        return CyclotomicElement(self.L, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicElement":
        return CyclotomicElement(self.L, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        return self + (-other)

    def __mul__(self, other: "CyclotomicElement") -> "CyclotomicElement":
        self._same_ring(other)
        return CyclotomicElement.from_poly(self.L, self.poly * other.poly)

    def _same_ring(self, other: "CyclotomicElement") -> None:
        if other.L != self.L:
            raise InvalidInputError(f"элементы разных колец: Z[ζ_{self.L}] и Z[ζ_{other.L}]")

    def galois(self, u: int) -> "CyclotomicElement":
        """Образ при ζ_L -> ζ_L^u, gcd(u, L) = 1."""
        if gcd(u, self.L) != 1:
            raise InvalidInputError(f"{u} не обратим по модулю {self.L}")
        terms: Dict[int, int] = {}
        for i, c in enumerate(self.coeffs):
            if c:
                e = (i * u) % self.L
                terms[e] = terms.get(e, 0) + c
        return CyclotomicElement.from_terms(self.L, terms)

    def norm(self) -> int:
        """N_{Q(ζ_L)/Q}(S) = Res(Φ_L, S)."""
        if self.is_zero:
            return 0
        return int(cyclotomic_poly(self.L).resultant(self.poly))

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if i == 0 else (f"ζ{self.L}" if i == 1 else f"ζ{self.L}^{i}")
            parts.append(f"{c:+d}·{mono}" if i else f"{c:+d}")
        return " ".join(parts) if parts else "0"


def smallest_integer_multiple(S: CyclotomicElement) -> int:
    """Наименьшее m ≥ 1 с m·S⁻¹ ∈ Z[ζ_L], то есть образующая идеала (S) ∩ Z."""
    if S.is_zero:
        raise IntegralityError("нулевая сумма корней: конечного кратного нет")
    phi = Poly(cyclotomic_poly(S.L).as_expr(), x, domain=QQ)
    inv = Poly(S.poly.as_expr(), x, domain=QQ).invert(phi)
    # базис 1, ζ, ..., ζ^{φ(L)-1} целый, так что m = НОК знаменателей
    m = lcm_all(int(Rational(c).q) for c in inv.all_coeffs())
    norm = abs(S.norm())
    if norm % m:
        raise IntegralityError(f"m = {m} не делит норму {norm}: ошибка арифметики")
    return m


def m_prime(m: int) -> int:
    """m' = m·НОК(rad(m), 2)."""
    return m * lcm_all([radical(m), 2])


# --- знаки Аткина-Лехнера ---------------------------------------------------

@dataclass(frozen=True)
class SignVector:
    """ε(w_q) ∈ {+1, -1} для простых q | M."""
    level: int
    signs: Tuple[Tuple[int, int], ...]
    label: str = ""

    def __post_init__(self):
        primes = set(factorize(self.level).primes)
        for q, s in self.signs:
            if s not in (1, -1):
                raise InvalidInputError(f"знак ε(w_{q}) должен быть ±1, получено {s}")
            if q not in primes:
                raise InvalidInputError(f"{q} не делит уровень {self.level}")

    @classmethod
    def from_mapping(cls, M: int, mapping: Mapping[int, int], label: str = "") -> "SignVector":
        return cls(M, tuple(sorted((int(q), int(s)) for q, s in mapping.items())), label)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.signs)

    def sign(self, q: int) -> int:
        for p, s in self.signs:
            if p == q:
                return s
        raise IntegralityError(f"нет знака ε(w_{q}) для уровня {self.level}")

    def al_sign(self, Q: int) -> int:
        """ε(w_Q) = ∏_{q | Q} ε(w_q)."""
        out = 1
        if Q == 1:
            return out
        for q in factorize(Q).primes:
            out *= self.sign(q)
        return out

    def is_admissible(self, N: int) -> bool:
        g = gcd(self.level, N // self.level)
        if g == 1:
            return False
        return any(self.as_dict().get(q) == -1 for q in factorize(g).primes)


def d_sub_m(d: int, M: int) -> int:
    """d_M = ∏_{p | d} p^{v_p(M)}."""
    out = 1
    if d == 1:
        return out
    for p in factorize(d).primes:
        out *= p ** valuation(M, p)
    return out


# --- суммы корней -------------------------------------------------------------

def _root_exponent(n: int, L: int, convention: str, twist: Optional[Mapping[int, int]]) -> int:
    if n == 1:
        return 0
    if convention == "coherent":
        return L // n
    e = 0
    for p, _, pe in factorize(n).prime_powers():
        k = (twist or {}).get(p, 1)
        e += k * (L // pe)
    return e % L


def _terms(N: int, M: int, c: Cusp, signs: SignVector) -> List[Tuple[int, int, int]]:
    """[(d, ε(w_{d_M}), gcd(b, d)), ...] по d ∈ ℛ_c."""
    out = []
    for d in unramified_hall_set(N, M, c):
        out.append((d, signs.al_sign(d_sub_m(d, M)), gcd(c.b, d)))
    return out


def root_sum(
    N: int,
    M: int,
    c: Cusp,
    signs: SignVector,
    convention: str = "coherent",
    twists: Optional[Twists] = None,
) -> CyclotomicElement:
    """S_c = Σ_{d ∈ ℛ_c} ε(w_{d_M})·ζ_{gcd(b,d)} в Z[ζ_L], L = НОК встречающихся порядков."""
    if convention not in ("crt", "coherent"):
        raise InvalidInputError(f"root_sum: соглашение {convention!r} не задаёт одну сумму")
    terms = _terms(N, M, c, signs)
    L = lcm_all(n for _, _, n in terms)
    coeffs: Dict[int, int] = {}
    for d, eps, n in terms:
        twist = (twists or {}).get(d) if convention == "crt" else None
        e = _root_exponent(n, L, convention, twist)
        coeffs[e] = coeffs.get(e, 0) + eps
    return CyclotomicElement.from_terms(L, coeffs)


def _exhaustive_multiple(N: int, M: int, c: Cusp, signs: SignVector) -> int:
    terms = _terms(N, M, c, signs)
    L = lcm_all(n for _, _, n in terms)
    orders = sorted({n for _, _, n in terms if n > 1})
    choices = [[u for u in range(1, n) if gcd(u, n) == 1] for n in orders]
    total = 1
    for ch in choices:
        total *= len(ch)
    if total > MAX_EXHAUSTIVE:
        raise InvalidInputError(f"перебор корней для каспа {c}: {total} вариантов, предел {MAX_EXHAUSTIVE}")
    out = 1
    for combo in product(*choices):
        pick = dict(zip(orders, combo))
        coeffs: Dict[int, int] = {}
        for _, eps, n in terms:
            e = 0 if n == 1 else (pick[n] * (L // n)) % L
            coeffs[e] = coeffs.get(e, 0) + eps
        out = lcm_all([out, smallest_integer_multiple(CyclotomicElement.from_terms(L, coeffs))])
    return out


@dataclass(frozen=True)
class CuspSum:
    cusp: Cusp
    value: Optional[CyclotomicElement]
    multiple: int


@dataclass
class IntegralityReport:
    N: int
    M: int
    convention: str
    sums: List[CuspSum] = field(default_factory=list)
    m: int = 1
    m_prime: int = 2
    signs_label: str = ""

    def as_dict(self) -> dict:
        by_b: Dict[int, CuspSum] = {}
        for cs in self.sums:
            by_b.setdefault(cs.cusp.b, cs)
        return {
            "N": self.N,
            "M": self.M,
            "convention": self.convention,
            "signs": self.signs_label,
            "m": self.m,
            "m_prime": self.m_prime,
            "sums": [
                {"b": b, "sum": str(cs.value) if cs.value is not None else None, "multiple": cs.multiple}
                for b, cs in sorted(by_b.items())
            ],
        }


def _bundled_twists(N: int, M: int) -> Dict[int, Dict[int, int]]:
    from .catalog import load_root_exponents
    return load_root_exponents(N, M)


def integrality_factor(
    N: int,
    M: int,
    signs: SignVector,
    convention: str = "coherent",
    twists: Optional[Twists] = None,
) -> IntegralityReport:
    """
    m_{N,M} = НОК по каспам ширины 1 наименьших кратных S_c; m' = m·НОК(rad m, 2).
    crt без явных twists берёт закреплённые повороты из root_exponents.tsv.
    """
    if convention not in CONVENTIONS:
        raise InvalidInputError(f"неизвестное соглашение {convention!r}; допустимы {CONVENTIONS}")
    if N % M or M == N or not satisfies_half_valuation(N, M):
        raise IntegralityError(f"(HV) нарушено для N={N}, M={M}")
    if signs.level != M:
        raise InvalidInputError(f"знаки заданы для уровня {signs.level}, а не {M}")
    if not signs.is_admissible(N):
        raise IntegralityError(f"знаки {signs.as_dict()} недопустимы: нужно ε(w_q) = -1 для q | gcd(M, N/M)")
    if convention == "crt" and twists is None:
        twists = _bundled_twists(N, M)

    report = IntegralityReport(N, M, convention, signs_label=signs.label)
    per_b: Dict[int, Tuple[Optional[CyclotomicElement], int]] = {}
    for c in width_one_cusps(N):
        if c.b not in per_b:
            if convention == "exhaustive":
                per_b[c.b] = (None, _exhaustive_multiple(N, M, c, signs))
            else:
                S = root_sum(N, M, c, signs, convention=convention, twists=twists)
                if S.is_zero:
                    raise IntegralityError(f"нулевая сумма S_c для каспа {c} (N={N}, M={M})")
                per_b[c.b] = (S, smallest_integer_multiple(S))
            logger.debug("N={} M={} b={}: кратное {}", N, M, c.b, per_b[c.b][1])
        value, multiple = per_b[c.b]
        report.sums.append(CuspSum(c, value, multiple))
    report.m = lcm_all(cs.multiple for cs in report.sums)
    report.m_prime = m_prime(report.m)
    return report


def combined_integrality(
    N: int,
    M: int,
    sign_vectors: Sequence[SignVector],
    convention: str = "coherent",
    twists: Optional[Twists] = None,
) -> Tuple[int, int, List[IntegralityReport]]:
    """Несколько допустимых векторов знаков: берётся НОД значений m."""
    if not sign_vectors:
        raise IntegralityError(f"нет векторов знаков для N={N}, M={M}")
    reports = [integrality_factor(N, M, s, convention, twists) for s in sign_vectors]
    m = 0
    for r in reports:
        m = gcd(m, r.m)
    return m, m_prime(m), reports


def galois_invariant(N: int, M: int, signs: SignVector, twists: Optional[Twists] = None) -> bool:
    """m_{N,M} не меняется при замене ζ_L на ζ_L^u."""
    report = integrality_factor(N, M, signs, "crt", twists)
    for cs in report.sums:
        S = cs.value
        for u in range(2, S.L):
            if gcd(u, S.L) != 1:
                continue
            if smallest_integer_multiple(S.galois(u)) != cs.multiple:
                return False
    return True


def integrality_factors(
    rows: Iterable[Tuple[int, int, Sequence[SignVector]]], convention: str = "coherent"
) -> Dict[Tuple[int, int], Tuple[int, int]]:
    """{(N, M): (m, m')} для набора строк."""
    out = {}
    for N, M, vectors in rows:
        m, mp, _ = combined_integrality(N, M, vectors, convention)
        out[(N, M)] = (m, mp)
    return out
