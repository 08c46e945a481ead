# -*- coding: utf-8 -*-
import pytest

from starcurve.catalog import load_golden_table
from starcurve.errors import InvalidInputError
from starcurve.volcano import (
    ASCENDING,
    NO,
    YES,
    class_number_one_discriminants,
    cm_lift_report,
    isogeny_profile,
    unique_cyclic_isogeny,
)


def test_profiles():
    p = isogeny_profile(-16, 2)
    assert (p.ascending, p.horizontal, p.descending) == (1, 0, 2)
    p = isogeny_profile(-4, 2)
    assert (p.ascending, p.horizontal) == (0, 1)
    p = isogeny_profile(-7, 2)
    assert (p.ascending, p.horizontal, p.descending) == (0, 2, 0)
    p = isogeny_profile(-7, 3)
    assert (p.ascending, p.horizontal) == (0, 0)
    with pytest.raises(InvalidInputError):
        isogeny_profile(-7, 4)


def test_class_number_one():
    assert class_number_one_discriminants(200) == (-3, -4, -7, -8, -11, -12, -16, -19, -27, -28, -43, -67, -163)


def test_unique_isogenies():
    v = unique_cyclic_isogeny(-16, -4, 4)
    assert v.verdict == YES and v.paths == 1
    assert v.certificate[0].direction == ASCENDING
    assert unique_cyclic_isogeny(-27, -3, 9).verdict == YES
    assert unique_cyclic_isogeny(-16, -4, 2).verdict == YES


def test_isogeny_rejections():
    assert unique_cyclic_isogeny(-16, -3, 4).verdict == NO
    assert unique_cyclic_isogeny(-16, -4, 3).verdict == NO
    with pytest.raises(InvalidInputError):
        unique_cyclic_isogeny(-16, -4, 1)


@pytest.mark.parametrize(
    "N,pairs",
    [
        (100, [(-16, -4)]),
        (147, [(-27, -3)]),
        (52, [(-16, -4)]),
        (63, [(-27, -3)]),
        (84, [(-48, -3)]),
        (98, [(-12, -3)]),
        (150, [(-36, -4)]),
        (242, [(-28, -7)]),
        (294, [(-12, -3), (-48, -12)]),
        (308, [(-112, -7)]),
        (189, []),
    ],
)
def test_lift_examples(N, pairs):
    assert sorted(e.as_pair() for e in cm_lift_report(N)) == sorted(pairs)


@pytest.mark.parametrize("row", load_golden_table("table4"), ids=lambda r: str(r.level))
def test_lift_column(row):
    assert sorted(e.as_pair() for e in cm_lift_report(row.level)) == sorted(tuple(p) for p in row.lifts)


def test_round_trip_through_surface_is_not_unique():
    # j = 0 имеет три спуска степени 2, после подъёма остаются два ядра
    v = unique_cyclic_isogeny(-48, -12, 8)
    assert v.verdict == NO
    assert v.paths == 2


@pytest.mark.parametrize("N", [168, 312])
def test_no_lift_through_surface_round_trip(N):
    assert (-48, -12) not in [e.as_pair() for e in cm_lift_report(N)]
