# -*- coding: utf-8 -*-
import threading

import pytest

from starcurve.batch import run_levels
from starcurve.report import LevelRow


def _fake(N: int) -> LevelRow:
    return LevelRow(N, N % 3, None, 1, ())


def test_order_is_preserved():
    levels = [97, 5, 40, 11, 3, 72, 8]
    rows = run_levels(levels, jobs=4, fn=_fake)
    assert [r.level for r in rows] == levels


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv("STARCURVE_JOBS", "2")
    seen = set()

    def fn(N):
        seen.add(threading.current_thread().name)
        return _fake(N)

    assert len(run_levels(list(range(1, 30)), fn=fn)) == 29
    assert 1 <= len(seen) <= 2


def test_first_error_is_raised():
    def fn(N):
        if N in (3, 7):
            raise ValueError(f"сбой на {N}")
        return _fake(N)

    with pytest.raises(ValueError, match="сбой на 3"):
        run_levels([1, 2, 3, 4, 5, 6, 7], jobs=1, fn=fn)


def test_empty_input():
    assert run_levels([], jobs=3, fn=_fake) == []


def test_default_worker_uses_golden():
    from starcurve.catalog import load_golden_table

    golden = {g.level: g for g in load_golden_table("table1")}
    rows = run_levels([40, 48], jobs=2, golden=golden)
    assert [r.q_points for r in rows] == [6, 8]
