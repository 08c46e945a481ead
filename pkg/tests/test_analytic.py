# -*- coding: utf-8 -*-
import math
import random

import mpmath
import pytest

from starcurve.analytic import (
    PUBLISHED_THRESHOLDS,
    bessel_j1,
    bessel_j1_with_error,
    error_bound,
    is_decreasing,
    kloosterman,
    sq_bound,
    sq_partial,
    threshold,
    weil_bound,
)
from starcurve.errors import InvalidInputError


def test_kloosterman_small():
    assert kloosterman(1, 1, 3) == pytest.approx(-1)
    assert kloosterman(5, 7, 1) == 1
    # S(0, 0; c) = φ(c)
    assert kloosterman(0, 0, 12) == pytest.approx(4)
    with pytest.raises(InvalidInputError):
        kloosterman(1, 1, 0)


def test_kloosterman_symmetric():
    for c in (7, 12, 30, 49):
        for m, n in ((1, 2), (3, 5), (4, 9)):
            assert kloosterman(m, n, c) == pytest.approx(kloosterman(n, m, c), abs=1e-9)


def test_weil_bound_on_random_triples():
    rng = random.Random(20240601)
    for _ in range(10_000):
        c = rng.randint(1, 200)
        m, n = rng.randint(-500, 500), rng.randint(-500, 500)
        assert abs(kloosterman(m, n, c)) <= weil_bound(m, n, c) + 1e-9


@pytest.mark.parametrize("x", [0.0, 0.1, -1.5, 3.0, 7.25, 20.0, 49.9])
def test_bessel_matches_mpmath(x):
    value, err = bessel_j1_with_error(x)
    assert value == pytest.approx(float(mpmath.besselj(1, x)), abs=1e-12)
    assert err < 1e-12
    assert abs(value) <= abs(x) / 2 + 1e-15


def test_bessel_domain():
    with pytest.raises(InvalidInputError):
        bessel_j1(50.5)


def test_sq_partial_is_dominated_by_bound():
    for M, Q in ((15, 1), (15, 3), (26, 13), (22, 2)):
        step = M // Q
        for c in (step, 2 * step, 5 * step):
            if math.gcd(c, Q) != 1:
                continue
            assert abs(sq_partial(M, Q, c)) <= sq_bound(M, Q, c)


def test_sq_preconditions():
    with pytest.raises(InvalidInputError):
        sq_partial(12, 2, 6)
    with pytest.raises(InvalidInputError):
        sq_bound(15, 3, 4)
    with pytest.raises(InvalidInputError):
        sq_bound(15, 3, 15)


def test_error_bound_domain():
    with pytest.raises(InvalidInputError):
        error_bound(2, 36)
    with pytest.raises(InvalidInputError):
        error_bound(11, 100)


@pytest.mark.parametrize("p,q", [(13, 251), (2, 1701), (3, 1101)])
def test_bound_below_one_at_published_threshold(p, q):
    b = error_bound(p, q)
    assert b.total < 1 - 1e-3
    assert b.total == pytest.approx(b.leading + 2 * math.pi * (b.weil_block + b.f1 + b.f2))


@pytest.mark.parametrize("p", sorted(PUBLISHED_THRESHOLDS))
def test_bound_is_decreasing(p):
    assert is_decreasing(p, 37, 2000)


@pytest.mark.parametrize("p,q0", [(2, 1621), (3, 1077), (13, 242)])
def test_threshold_within_published(p, q0):
    r = threshold(p)
    assert r.q0 == q0
    assert r.within_published
    assert r.decreasing_certified
    assert r.total_at_q0 < 1 <= error_bound(p, q0 - 1).total
    assert r.high_precision_total == pytest.approx(r.total_at_q0, abs=1e-9)


@pytest.mark.parametrize("p,q0", [(5, 641), (7, 455)])
def test_threshold_above_published_for_printed_formula(p, q0):
    r = threshold(p, verify_high_precision=False)
    assert r.q0 == q0
    assert not r.within_published
    assert r.high_precision_total is None


def test_high_precision_agrees():
    for p, q in ((2, 1701), (7, 451), (13, 37)):
        lo, hi = error_bound(p, q), error_bound(p, q, high_precision=True)
        assert hi.high_precision
        assert hi.total == pytest.approx(lo.total, abs=1e-9)
