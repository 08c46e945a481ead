# -*- coding: utf-8 -*-
import json

import pytest

from starcurve.catalog import load_exceptional_lists
from starcurve.cli import main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_cusps(capsys):
    assert main(["cusps", "72"]) == 0
    assert "рациональных 4" in capsys.readouterr().out


def test_genus_json(capsys):
    assert main(["--json", "genus", "40"]) == 0
    payload = _json(capsys)
    assert payload["genus_star"] == 1
    assert payload["level"] == 40


def test_heegner_json(capsys):
    assert main(["--json", "heegner", "40"]) == 0
    assert sorted(_json(capsys)["heegner"]) == [-160, -60, -16, -15]


def test_heegner_without_points_is_input_error(capsys):
    assert main(["heegner", "40", "--disc", "-7"]) == 2
    assert "ошибка" in capsys.readouterr().err


def test_integrality(capsys):
    assert main(["--json", "integrality", "441", "21"]) == 0
    payload = _json(capsys)
    assert (payload["m"], payload["m_prime"]) == (7, 98)


def test_integrality_remote_offline_uses_bundled(capsys):
    assert main(["integrality", "441", "21", "--remote"]) == 0
    assert "m = 7" in capsys.readouterr().out


def test_exceptional(capsys):
    assert main(["exceptional", "40"]) == 0
    assert "исключительный" in capsys.readouterr().out
    assert main(["exceptional", "10"]) == 2
    assert main(["exceptional"]) == 2


def test_lfunc(capsys):
    assert main(["--json", "lfunc", "--p", "13", "--q", "251"]) == 0
    assert _json(capsys)["total"] < 1
    assert main(["lfunc", "--q", "251"]) == 2
    assert main(["lfunc", "--p", "13", "--q", "251", "--find-threshold"]) == 2


def test_lfunc_threshold(capsys):
    assert main(["--json", "lfunc", "--p", "13", "--find-threshold"]) == 0
    (result,) = _json(capsys)
    assert result["q0"] == 242


def test_report_csv(capsys):
    assert main(["--csv", "report", "40", "147", "--table", "table1", "--jobs", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("level,genus,q_points")
    assert [line.split(",")[0] for line in lines[1:]] == ["40", "147"]


def test_verify_accounting(capsys):
    assert main(["verify-tables", "--only", "accounting"]) == 0
    assert "PASS" in capsys.readouterr().out


def test_verify_family(capsys):
    assert main(["verify-tables", "--only", "family"]) == 0


def test_verify_detects_perturbed_table(data_copy, capsys):
    path = data_copy / "table1.json"
    raw = json.loads(path.read_text(encoding="utf-8"))
    raw["rows"] = [r for r in raw["rows"] if r["level"] in (40, 48)]
    raw["rows"][0]["genus"] = 7
    path.write_text(json.dumps(raw, ensure_ascii=False), encoding="utf-8")
    assert main(["--data-dir", str(data_copy), "verify-tables", "--only", "table1"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "N=40: genus" in out


def test_bad_log_level():
    assert main(["--log-level", "LOUD", "genus", "40"]) == 2


def test_unknown_command():
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == 2


def test_json_after_subcommand(capsys):
    assert main(["cusps", "72", "--json"]) == 0
    assert _json(capsys)["rational"] == 4
    assert main(["--json", "cusps", "72"]) == 0
    assert _json(capsys)["rational"] == 4


def test_genus_star_only(capsys):
    assert main(["genus", "200", "--star", "--json"]) == 0
    assert _json(capsys) == {"level": 200, "genus_star": 4}
    assert main(["genus", "40", "--star"]) == 0
    assert "= 1" in capsys.readouterr().out


def test_exceptional_minimal_family_up_to_bound(capsys):
    lists = load_exceptional_lists()
    assert main(["exceptional", "--max", "500", "--minimal", "--json"]) == 0
    assert _json(capsys)["L0"] == [n for n in lists["L0"] if n <= 500]


def test_exceptional_levels_up_to_bound(capsys):
    assert main(["--json", "exceptional", "--max", "200"]) == 0
    levels = _json(capsys)["levels"]
    family = [n for n in load_exceptional_lists()["L0"] if n <= 200 and n not in (125, 169)]
    assert set(family) <= set(levels)
    assert 10 not in levels and 16 not in levels
    assert max(levels) <= 200


def test_integrality_default_is_coherent(capsys):
    assert main(["integrality", "450", "15", "--json"]) == 0
    payload = _json(capsys)
    assert (payload["convention"], payload["m"], payload["m_prime"]) == ("coherent", 10, 100)
    assert main(["integrality", "450", "15", "--convention", "crt", "--json"]) == 0
    assert _json(capsys)["m"] == 155


def test_integrality_exhaustive_roots(capsys):
    assert main(["integrality", "450", "15", "--exhaustive-roots", "--json"]) == 0
    payload = _json(capsys)
    assert (payload["convention"], payload["m"]) == ("exhaustive", 310)


def test_integrality_signs_file(tmp_path, capsys):
    path = tmp_path / "signs.tsv"
    path.write_text("# N M q sign\n441\t21\t3\t+1\n441\t21\t7\t-1\n250\t50\t2\t1\n", encoding="utf-8")
    assert main(["integrality", "441", "21", "--signs", str(path), "--json"]) == 0
    payload = _json(capsys)
    assert (payload["m"], payload["m_prime"]) == (7, 98)
    assert payload["reports"][0]["signs"] == "signs"


@pytest.mark.parametrize(
    "content",
    [
        "441\t21\t3\t1\n441\t21\t7\t1\n",   # ε(w₇) = +1: недопустимо
        "441\t21\t3\n",
        "441\t21\t3\t2\n441\t21\t7\t-1\n",
        "441\t21\t3\t1\n",                  # нет знака для 7
        "250\t50\t2\t1\n250\t50\t5\t-1\n",
    ],
)
def test_integrality_bad_signs_file(tmp_path, capsys, content):
    path = tmp_path / "signs.tsv"
    path.write_text(content, encoding="utf-8")
    assert main(["integrality", "441", "21", "--signs", str(path)]) == 2
    assert "ошибка" in capsys.readouterr().err


def test_verify_accounting_uses_computed_rows(data_copy, capsys):
    # эталон сбалансирован, но точек Хегнера на одну меньше, чем вычисляется
    path = data_copy / "table1.json"
    raw = json.loads(path.read_text(encoding="utf-8"))
    row = next(r for r in raw["rows"] if r["level"] == 40)
    row["q_points"], row["heegner"] = 5, [-15, -16, -60]
    raw["rows"] = [row]
    path.write_text(json.dumps(raw, ensure_ascii=False), encoding="utf-8")
    t4 = data_copy / "table4.json"
    raw4 = json.loads(t4.read_text(encoding="utf-8"))
    raw4["rows"] = [r for r in raw4["rows"] if r["level"] in (168, 312)]
    t4.write_text(json.dumps(raw4, ensure_ascii=False), encoding="utf-8")
    assert main(["--data-dir", str(data_copy), "verify-tables", "--only", "accounting"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "N=40: отрицательный остаток -1" in out
    assert "N=168" not in out and "N=312" not in out
