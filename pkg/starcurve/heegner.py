# -*- coding: utf-8 -*-
"""
Точки Хегнера на X₀(N): тройки (O, η, [a]), действия Аткина-Лехнера и Галуа,
стабилизаторы и рациональность образа на X₀(N)*.

Рациональность решается перебором: W-орбита рациональна, если образ
представителя при любом σ(b) (с сопряжением и без) снова лежит в ней.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from loguru import logger

from .arith import factorize, hall_divisors, is_hall_divisor, kronecker
from .errors import InvalidInputError
from .quadforms import QuadraticForm, class_group, ideal_to_form, inverse_form, is_principal
from .quadorders import (
    ImagQuadOrder,
    OrderIdeal,
    admissible_ideals,
    admissible_primepower,
    conjugate_ideal,
    eta_hall_part,
    order_from_disc,
)

MAX_CLASS_NUMBER = 16


@dataclass(frozen=True)
class HeegnerTriple:
    order: ImagQuadOrder
    eta: OrderIdeal
    a_class: QuadraticForm

    @property
    def level(self) -> int:
        return self.eta.norm

    @property
    def discriminant(self) -> int:
        return self.order.D

    def sort_key(self) -> Tuple:
        return (self.eta.components, self.a_class.as_tuple())

    def __str__(self) -> str:
        return f"(D={self.order.D}, {self.eta}, {self.a_class})"


@dataclass(frozen=True)
class HeegnerOrbit:
    level: int
    discriminant: int
    members: Tuple[HeegnerTriple, ...]
    star_rational: bool
    stabilizer: Tuple[int, ...]


@dataclass(frozen=True)
class Existence:
    exists: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.exists


def heegner_exists(N: int, D: int) -> Existence:
    """Для каждого p^k ‖ N нужен допустимый идеал нормы p^k в порядке дискриминанта D."""
    O = order_from_disc(D)
    if N < 1:
        raise InvalidInputError(f"уровень должен быть ≥ 1, получено {N}")
    for p, k in factorize(N).factors:
        if admissible_primepower(O, p, k):
            continue
        if D % p and kronecker(D, p) == -1:
            return Existence(False, f"{p} инертно в дискриминанте {D}")
        if D % p == 0 and k >= 2:
            return Existence(False, f"{p} разветвлено, но {p}² | {N}")
        return Existence(False, f"нет допустимого идеала нормы {p}^{k}")
    return Existence(True)


def enumerate_heegner(N: int, D: int) -> List[HeegnerTriple]:
    """𝒩_N(D)·h(D) троек: допустимые η нормы N на классы форм."""
    ex = heegner_exists(N, D)
    if not ex:
        raise InvalidInputError(f"точек Хегнера (N={N}, D={D}) нет: {ex.reason}")
    O = order_from_disc(D)
    G = class_group(D)
    out = [HeegnerTriple(O, eta, f) for eta in admissible_ideals(O, N) for f in G.elements]
    out.sort(key=HeegnerTriple.sort_key)
    return out


def al_act(P: HeegnerTriple, Q: int) -> HeegnerTriple:
    """w_Q(O, η, [a]) = (O, conj(η_Q)·η_{N/Q}, [a·η_Q⁻¹])."""
    N = P.level
    if not is_hall_divisor(Q, N):
        raise InvalidInputError(f"{Q} не является делителем Холла {N}")
    if Q == 1:
        return P
    eta_q, eta_rest = eta_hall_part(P.eta, Q)
    eta_new = conjugate_ideal(eta_q).combine(eta_rest)
    G = class_group(P.discriminant)
    a_new = G.mul(P.a_class, inverse_form(ideal_to_form(P.order, eta_q)))
    return HeegnerTriple(P.order, eta_new, a_new)


def galois_act(P: HeegnerTriple, b_class: QuadraticForm, with_conjugation: bool = False) -> HeegnerTriple:
    """σ(b): [a] -> [a·b⁻¹]; с сопряжением сначала (η, [a]) -> (conj η, [a⁻¹])."""
    G = class_group(P.discriminant)
    eta, a = P.eta, P.a_class
    if with_conjugation:
        eta, a = conjugate_ideal(eta), inverse_form(a)
    a = G.mul(a, inverse_form(b_class))
    return HeegnerTriple(P.order, eta, a)


def stabilizer(P: HeegnerTriple) -> Tuple[int, ...]:
    """{Q ‖ N : conj(η_Q) = η_Q и [η_Q] главный}."""
    G = class_group(P.discriminant)
    out = []
    for Q in hall_divisors(P.level):
        eta_q, _ = eta_hall_part(P.eta, Q)
        if eta_q.is_self_conjugate and is_principal(G, ideal_to_form(P.order, eta_q)):
            out.append(Q)
    return tuple(out)


def _w_orbits(N: int, triples: Sequence[HeegnerTriple]) -> List[List[HeegnerTriple]]:
    gens = [pe for _, _, pe in factorize(N).prime_powers()]
    parent = {t: t for t in triples}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t in triples:
        for Q in gens:
            img = al_act(t, Q)
            ra, rb = find(t), find(img)
            if ra != rb:
                parent[rb] = ra
    groups: Dict[HeegnerTriple, List[HeegnerTriple]] = {}
    for t in triples:
        groups.setdefault(find(t), []).append(t)
    return [sorted(g, key=HeegnerTriple.sort_key) for g in groups.values()]


def _could_be_rational(N: int, D: int) -> bool:
    G = class_group(D)
    return G.is_two_torsion and (2 ** factorize(N).omega) % G.order == 0


def star_rational_orbits(N: int, D: int) -> List[HeegnerOrbit]:
    triples = enumerate_heegner(N, D)
    G = class_group(D)
    possible = _could_be_rational(N, D)
    out: List[HeegnerOrbit] = []
    for members in _w_orbits(N, triples):
        rep = members[0]
        rational = False
        if possible:
            orbit = set(members)
            rational = all(
                galois_act(rep, b, tau) in orbit for b in G.elements for tau in (False, True)
            )
        out.append(HeegnerOrbit(N, D, tuple(members), rational, stabilizer(rep)))
    out.sort(key=lambda o: o.members[0].sort_key())
    return out


def _load_candidates() -> List[int]:
    from .catalog import load_candidates
    return load_candidates()


def rational_heegner_report(N: int, candidates: Optional[Iterable[int]] = None) -> List[int]:
    """Мультимножество D (по числу рациональных точек на X₀(N)*), по возрастанию |D|."""
    if candidates is None:
        candidates = _load_candidates()
    out: List[int] = []
    for D in sorted(set(candidates), key=abs):
        G = class_group(D)
        if G.order > MAX_CLASS_NUMBER or not _could_be_rational(N, D):
            continue
        if not heegner_exists(N, D):
            continue
        count = sum(1 for o in star_rational_orbits(N, D) if o.star_rational)
        if count:
            logger.debug("N={} D={}: рациональных точек {}", N, D, count)
        out.extend([D] * count)
    return out
