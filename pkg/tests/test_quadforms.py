# -*- coding: utf-8 -*-
from math import gcd

import pytest

from starcurve.catalog import load_candidates
from starcurve.errors import DiscriminantError, FormError
from starcurve.quadforms import (
    QuadraticForm,
    class_group,
    class_number,
    compose,
    inverse_form,
    is_principal,
    principal_form,
    reduce_form,
    two_torsion_discriminants,
)


def _discs(bound):
    return [D for D in range(-3, -bound - 1, -1) if D % 4 in (0, 1)]


def test_form_validation():
    with pytest.raises(FormError):
        QuadraticForm(1, 4, 1)
    with pytest.raises(FormError):
        QuadraticForm(2, 2, 2)
    assert QuadraticForm(2, 1, 3).discriminant == -23


def test_reduce():
    f = reduce_form(QuadraticForm(3, 2, 2))
    assert f == QuadraticForm(2, -2, 3) or f == QuadraticForm(2, 2, 3)
    assert f.is_reduced
    assert reduce_form(QuadraticForm(1, 0, 5)) == QuadraticForm(1, 0, 5)


@pytest.mark.parametrize(
    "D,h",
    [(-3, 1), (-4, 1), (-12, 1), (-16, 1), (-27, 1), (-28, 1), (-20, 2), (-23, 3), (-47, 5),
     (-71, 7), (-84, 4), (-99, 2), (-147, 2), (-420, 8)],
)
def test_class_numbers(D, h):
    assert class_number(D) == h


def test_bad_discriminant():
    with pytest.raises(DiscriminantError):
        class_group(-5)
    with pytest.raises(DiscriminantError):
        principal_form(8)


def test_compose_rejects_mixed_discriminants():
    with pytest.raises(DiscriminantError):
        compose(principal_form(-20), principal_form(-23))


def test_group_identity_and_inverse_up_to_2000():
    for D in _discs(2000):
        G = class_group(D)
        e = G.identity
        for f in G.elements:
            assert G.mul(f, e) == f
            assert G.mul(f, inverse_form(f)) == e


def test_group_associative_and_commutative_up_to_300():
    for D in _discs(300):
        G = class_group(D)
        els = G.elements
        for f in els:
            for g in els:
                assert G.mul(f, g) == G.mul(g, f)
                for k in els[:4]:
                    assert G.mul(G.mul(f, g), k) == G.mul(f, G.mul(g, k))


def test_element_orders():
    G = class_group(-23)
    assert G.exponent == 3
    assert not G.is_two_torsion
    assert class_group(-84).is_two_torsion
    assert is_principal(G, principal_form(-23))
    assert not is_principal(G, QuadraticForm(2, 1, 3))


def test_two_torsion_sweep_matches_bundled_candidates():
    assert two_torsion_discriminants(100) == [D for D in load_candidates() if D >= -100]


def _reduced_form_count(D):
    """Приведённые примитивные формы: |b| ≤ a ≤ c, b ≥ 0 при |b| = a или a = c."""
    count = 0
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 or (b * b - D) % (4 * a):
                continue
            c = (b * b - D) // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if gcd(gcd(a, b), c) == 1:
                count += 1
        a += 1
    return count


def test_class_number_against_reduced_form_count_up_to_2000():
    for D in _discs(2000):
        assert class_number(D) == _reduced_form_count(D), D
