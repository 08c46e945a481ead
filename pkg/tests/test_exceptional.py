# -*- coding: utf-8 -*-
import pytest

from starcurve.catalog import load_exceptional_lists
from starcurve.errors import InvalidInputError
from starcurve.exceptional import (
    adjusted_family,
    exceptional_tuple,
    hv_check,
    is_exceptional_level,
    minimal_exceptional_family,
    shape_classify,
    square_above,
)


def test_exceptional_tuples():
    assert exceptional_tuple(13)
    assert not exceptional_tuple(11)
    assert exceptional_tuple(2, (3,))
    assert exceptional_tuple(7, (3,))
    assert not exceptional_tuple(3, (7,))
    assert exceptional_tuple(2, (3, 5))
    assert not exceptional_tuple(2, (3, 5, 7))
    with pytest.raises(InvalidInputError):
        exceptional_tuple(2, (2,))


@pytest.mark.parametrize("N", [40, 48, 72, 99, 147, 225, 450, 1250])
def test_exceptional_levels(N):
    cls = is_exceptional_level(N)
    assert cls.exceptional
    assert cls.witness == ""


@pytest.mark.parametrize("N", [63, 484, 1331 * 2])
def test_non_exceptional_levels(N):
    cls = is_exceptional_level(N)
    assert not cls.exceptional
    assert cls.witness


@pytest.mark.parametrize("N", [30, 32, 1])
def test_level_shape_precondition(N):
    with pytest.raises(InvalidInputError):
        is_exceptional_level(N)


def test_shapes():
    assert shape_classify(144) == (4, (4, 3))
    assert shape_classify(40) == (1, (2, 3, 5))
    assert shape_classify(120) == (1, (2, 3, 15))
    assert shape_classify(63, strict=False) is None
    with pytest.raises(InvalidInputError):
        shape_classify(63)


def test_hv_and_square_above():
    assert hv_check(441, 21)
    assert not hv_check(16, 8)
    assert square_above(72, 8)
    assert square_above(1250, 50)
    assert not square_above(40, 40)
    assert not square_above(40, 20)


def test_minimal_family_and_adjustment():
    lists = load_exceptional_lists()
    family = minimal_exceptional_family()
    assert set(family) == set(lists["L0"])
    assert set(adjusted_family(family)) == set(lists["L1"])


def test_family_with_injected_genus():
    # с g* ≡ 0 семейство пусто, с g* ≡ 1 остаются только минимальные по «квадрату над»
    assert minimal_exceptional_family(200, genus_star_fn=lambda n: 0) == []
    fam = minimal_exceptional_family(200, genus_star_fn=lambda n: 1)
    assert all(not square_above(a, b) for a in fam for b in fam)


def test_adjustment_sets():
    lists = load_exceptional_lists()
    assert set(lists["removed"]) <= set(lists["L0"])
    assert sorted((set(lists["L0"]) - set(lists["removed"])) | set(lists["added"])) == lists["L1"]
    # 1125 есть в исходном списке, но не в скорректированном
    assert 1125 in lists["L"] and 1125 not in lists["L1"]
