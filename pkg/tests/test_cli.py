import json
import subprocess
import sys

import pytest

from powermonoid.cli import main
from powermonoid.serialize import (FIXTURE_NAMES, dumps_monoid, fixture_text, load_fixture,
                                   load_monoid, monoid_from_dict)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


@pytest.fixture
def fixture_dir(tmp_path, capsys):
    assert main(["fixtures", "--dump", str(tmp_path)]) == 0
    capsys.readouterr()
    return tmp_path


def test_validate_fixture_files(fixture_dir, capsys):
    code, d = run_json(capsys, "validate", str(fixture_dir / "z2.json"))
    assert code == 0 and d["valid"]
    code, d = run_json(capsys, "validate", str(fixture_dir / "h2.json"))
    assert code == 0 and d["size"] == 7


def test_validate_corrupted(tmp_path, capsys):
    data = {"size": 3, "identity": 0, "labels": ["0", "1", "2"],
            "table": [[0, 1, 2], [1, 2, 1], [2, 0, 1]]}
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(data))
    code, d = run_json(capsys, "validate", str(p))
    assert code == 2
    assert d["error"] == "NotAssociative" and len(d["witness"]) == 3


def test_validate_semigroup_s(capsys):
    code, d = run_json(capsys, "validate", "s", "--semigroup")
    assert code == 0 and d["almost_breakable"] and not d["breakable"]
    code, d = run_json(capsys, "validate", "s")
    assert code == 2 and d["error"] == "NoIdentity"


def test_malformed_json_table(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"table": [[0, "x"], [1, 0]]}))
    code, _ = run_json(capsys, "validate", str(p))
    assert code == 2


def test_missing_file_is_usage_error(capsys):
    code, _, err = run(capsys, "validate", "/nonexistent/file.json")
    assert code == 1 and "no such file" in err


def test_bad_arguments_exit_one(capsys):
    with pytest.raises(SystemExit) as info:
        main(["classify"])
    assert info.value.code == 1


def test_minfactor(capsys):
    code, d = run_json(capsys, "minfactor", "z3", "0,1,2")
    assert code == 0 and len(d["minimal"]) == 3
    code, d = run_json(capsys, "minfactor", "z5", "0,1,2,3")
    assert {m["length"] for m in d["minimal"]} == {2, 3}
    code, d = run_json(capsys, "minfactor", "z5", "0")
    assert d["minimal"] == [{"length": 0, "multiset": [], "word": []}]


def test_identity_added_with_warning(capsys, caplog):
    code, d = run_json(capsys, "minfactor", "z3", "1,2")
    assert code == 0 and d["subset"] == ["0", "1", "2"]
    assert "identity" in caplog.text


def test_bad_subset(capsys):
    code, d = run_json(capsys, "minfactor", "chain2", "1")
    assert code == 2 and d["error"] == "BadSubset"


def test_factorize_and_irreducibles(capsys):
    code, d = run_json(capsys, "factorize", "z5", "0,1,2,3", "--max-len", "3")
    assert [["0", "1"], ["0", "2"]] in d["factorizations"]
    code, d = run_json(capsys, "irreducibles", "z3", "0,1,2")
    assert [i["set"] for i in d["irreducibles"]] == [["0", "1"], ["0", "2"]]


def test_classify_h1(capsys):
    code, d = run_json(capsys, "classify", "h1")
    assert code == 0
    assert d["pm_umf_theorem"]["value"] == "no"
    assert d["pm_umf_theorem"]["trace"][-1]["rule"] == "twisted"


def test_classify_budget(capsys):
    code, d = run_json(capsys, "classify", "h2", "--budget", "8")
    assert code == 3 and d["brute_skipped"] and d["pm_umf_brute"]["value"] is None


def test_classify_pretty(capsys):
    code, out, _ = run(capsys, "classify", "z2", "--pretty")
    assert code == 0 and "UmF (theorem) yes" in out


def test_census_command(tmp_path, capsys):
    code, d = run_json(capsys, "census", "3", "--out", str(tmp_path))
    assert code == 0 and d["count"] == 7
    lines = (tmp_path / "census-3.jsonl").read_text().splitlines()
    assert len(lines) == 7


def test_census_cap(capsys):
    code, _, err = run(capsys, "census", "9")
    assert code == 1


def test_find_command(capsys):
    code, d = run_json(capsys, "find", "umf_theorem=unknown", "--order", "5")
    assert code == 0 and isinstance(d, list)
    code, _, _ = run(capsys, "find", "garbage", "--order", "2")
    assert code == 1


def test_output_is_byte_stable(capsys):
    _, a, _ = run(capsys, "classify", "h2")
    _, b, _ = run(capsys, "classify", "h2")
    assert a == b


def test_fixtures_listing(capsys):
    code, d = run_json(capsys, "fixtures")
    assert d == list(FIXTURE_NAMES)
    code, out, _ = run(capsys, "fixtures", "h1")
    assert json.loads(out)["size"] == 5


@pytest.mark.parametrize("name", [n for n in FIXTURE_NAMES if n != "s"])
def test_round_trip(name, tmp_path):
    H = load_fixture(name)
    p = tmp_path / f"{name}.json"
    p.write_text(dumps_monoid(H))
    assert load_monoid(p) == H
    assert dumps_monoid(H) == fixture_text(name)
    assert monoid_from_dict(json.loads(fixture_text(name))) == H


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "powermonoid", "validate", "z2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["valid"]
