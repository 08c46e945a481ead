# -*- coding: utf-8 -*-
import json

import httpx
import pytest

from starcurve.catalog import (
    ALSignRecord,
    bundled_pairs,
    fetch_signs,
    load_candidates,
    load_exceptional_lists,
    load_exceptional_points,
    load_golden_table,
    load_integrality_table,
    load_root_exponents,
    load_signs,
    parse_golden,
    signs_agree,
)
from starcurve.errors import DataError

NEWFORMS_21 = {
    "data": [
        {"label": "21.2.a.a", "atkin_lehner_eigenvals": [[3, 1], [7, -1]]},
        {"label": "21.2.a.z", "atkin_lehner_eigenvals": [[3, 1], [7, 1]]},
    ]
}


def _append(path, text):
    with open(path, "a", encoding="utf-8") as f:
        f.write(text)


def test_bundled_signs():
    (rec,) = load_signs(441, 21)
    assert rec.signs == {3: 1, 7: -1}
    assert rec.N == 441 and rec.source == "bundled"
    assert len(load_signs(1225, 35)) == 2
    assert (1225, 35) in bundled_pairs()
    with pytest.raises(DataError):
        load_signs(999999, 21)


def test_invalid_records_are_dropped(data_copy):
    _append(
        data_copy / "al_signs.tsv",
        "441\t21\tbadsign\t3\t2\n441\t21\tbadsign\t7\t-1\n"
        "441\t21\tallplus\t3\t1\n441\t21\tallplus\t7\t1\n"
        "441\t21\tmissing\t3\t-1\n",
    )
    assert [r.label for r in load_signs(441, 21, data_copy)] == ["unlabeled"]


def test_pair_without_admissible_record(data_copy):
    _append(data_copy / "al_signs.tsv", "999\t37\tcoprime\t37\t-1\n")
    with pytest.raises(DataError):
        load_signs(999, 37, data_copy)


def test_broken_sign_line(data_copy):
    _append(data_copy / "al_signs.tsv", "441\t21\tshort\t3\n")
    with pytest.raises(DataError):
        load_signs(441, 21, data_copy)


def test_record_validation():
    with pytest.raises(ValueError):
        ALSignRecord(M=21, label="x", signs={3: 1})
    with pytest.raises(ValueError):
        ALSignRecord(M=21, label="x", signs={3: 1, 7: 0})
    assert ALSignRecord(M=21, label="x", signs={3: 1, 7: -1}).sign_vector().is_admissible(441)


def test_root_exponents():
    assert load_root_exponents(450, 15) == {15: {3: -1, 5: -1}}
    assert load_root_exponents(441, 21) == {}


def test_candidates(data_copy):
    cands = load_candidates()
    assert cands[:4] == [-3, -4, -7, -8]
    assert all(D < 0 and D % 4 in (0, 1) for D in cands)
    assert len(cands) == len(set(cands))
    (data_copy / "heegner_discriminants.txt").write_text("-4 -5\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_candidates(data_copy)
    (data_copy / "heegner_discriminants.txt").write_text("# пусто\n", encoding="utf-8")
    with pytest.raises(DataError):
        load_candidates(data_copy)
    (data_copy / "heegner_discriminants.txt").unlink()
    with pytest.raises(DataError):
        load_candidates(data_copy)


def test_other_tables():
    assert {(r.N, r.M) for r in load_integrality_table()} >= {(441, 21), (1225, 35), (1250, 50)}
    lists = load_exceptional_lists()
    assert {"L", "L0", "L1"} <= set(lists)
    assert 1125 in lists["L"] and 1125 not in lists["L1"]
    points = load_exceptional_points()
    assert points["residuals"] == {63: 2, 75: 1, 125: 1, 147: 2}


def test_points_schema(data_copy):
    path = data_copy / "exceptional_points.json"
    raw = json.loads(path.read_text(encoding="utf-8"))
    del raw["residuals"]
    path.write_text(json.dumps(raw), encoding="utf-8")
    with pytest.raises(DataError):
        load_exceptional_points(data_copy)


def test_golden_tables(data_copy):
    assert len(load_golden_table("table1")) == 23
    assert len(load_golden_table("table4")) == 79
    with pytest.raises(DataError):
        load_golden_table("table9")
    (data_copy / "table1.json").write_text("{", encoding="utf-8")
    with pytest.raises(DataError):
        load_golden_table("table1", data_copy)


def test_golden_schema():
    row = {"level": 40, "genus": 1, "q_points": 6, "q_cusps": 2, "heegner": [-15]}
    assert parse_golden({"rows": [row]})[0].lifts == []
    with pytest.raises(DataError):
        parse_golden({"rows": [{"level": 40}]})
    with pytest.raises(DataError):
        parse_golden({"rows": [dict(row, colour="red")]})
    with pytest.raises(DataError):
        parse_golden({"rows": [row, row]})
    with pytest.raises(DataError):
        parse_golden([row])


# --- удалённый каталог ----------------------------------------------------------

def test_offline_falls_back_to_bundled():
    recs = fetch_signs(21, N=441)
    assert [r.source for r in recs] == ["bundled"]
    assert [(r.label, r.signs, r.N) for r in fetch_signs(21)] == [("unlabeled", {3: 1, 7: -1}, None)]


def test_offline_level_fallback_merges_pairs():
    # 50.2.a.a встречается у N = 250 и N = 1250, 50.2.a.b у N = 500
    recs = fetch_signs(50)
    assert [r.label for r in recs] == ["50.2.a.a", "50.2.a.b"]
    assert recs[1].signs == {2: -1, 5: 1}


def test_remote_fetch_and_cache(online_settings):
    calls = []

    def handler(request: httpx.Request) -> httpx.Response:
        calls.append(request)
        assert request.url.path == "/api/mf_newforms"
        assert request.url.params["level"] == "21"
        return httpx.Response(200, json=NEWFORMS_21)

    recs = fetch_signs(21, N=441, settings=online_settings, transport=httpx.MockTransport(handler))
    assert [(r.label, r.source, r.N) for r in recs] == [("21.2.a.a", "remote", 441)]
    assert len(list(online_settings.cache_dir.glob("*.json"))) == 1

    again = fetch_signs(21, settings=online_settings, transport=httpx.MockTransport(handler))
    assert len(again) == 2
    assert len(calls) == 1


@pytest.mark.parametrize(
    "response",
    [
        httpx.Response(500),
        httpx.Response(200, json={"rows": []}),
        httpx.Response(200, json={"data": [{"label": "21.2.a.a"}]}),
        httpx.Response(200, content=b"not json"),
    ],
)
def test_remote_failures_fall_back(online_settings, response):
    transport = httpx.MockTransport(lambda request: response)
    recs = fetch_signs(21, N=441, settings=online_settings, transport=transport)
    assert [r.source for r in recs] == ["bundled"]
    assert not list(online_settings.cache_dir.glob("*.json"))


def test_network_error_falls_back(online_settings):
    def handler(request):
        raise httpx.ConnectError("нет сети", request=request)

    recs = fetch_signs(21, N=441, settings=online_settings, transport=httpx.MockTransport(handler))
    assert [r.label for r in recs] == ["unlabeled"]


def test_signs_agree():
    bundled = [ALSignRecord(M=21, label="21.2.a.a", signs={3: 1, 7: -1})]
    same = [ALSignRecord(M=21, label="21.2.a.a", signs={3: 1, 7: -1}, source="remote")]
    other = [ALSignRecord(M=21, label="21.2.a.a", signs={3: -1, 7: -1}, source="remote")]
    assert signs_agree(bundled, same) == []
    assert signs_agree(bundled, other) == ["21.2.a.a"]
