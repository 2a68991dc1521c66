import json

import pytest

from hindman_lab.cli import main, parse_bound, parse_codes


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_parse_helpers():
    assert parse_bound("1024") == parse_bound("2^10") == parse_bound("2**10") == 1024
    assert parse_codes("1..8") == list(range(1, 9))
    assert parse_codes("{1,4}") == [18]
    assert parse_codes("7") == [7]


def test_color_range(capsys):
    code, out, _ = run(capsys, "color", "c31", "builtin:default", "1..8")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 8
    assert lines[4] == "5, {0,2}, " + lines[4].split(", ")[-1]


def test_color_set_literal(capsys):
    code, out, _ = run(capsys, "color", "c34", "--catalog", "builtin:default", "{1,4}")
    assert code == 0 and out.strip().split(", ")[-1] in ("0", "1")


def test_color_bad_catalog(tmp_path, capsys):
    bad = tmp_path / "cat.json"
    bad.write_text(json.dumps({"families": [{"kind": "bogus"}]}))
    assert run(capsys, "color", "c31", str(bad), "1..3")[0] == 2
    assert run(capsys, "color", "c99", "1")[0] == 2


def test_color_overflow(capsys):
    assert run(capsys, "color", "parity", "{70}")[0] == 3


def test_color_trace(capsys):
    code, _, err = run(capsys, "color", "c31", "builtin:singletons", "{1,5}", "--trace")
    assert code == 0 and json.loads(err.strip().splitlines()[-1])["index"] == 1


def test_search(capsys):
    code, out, _ = run(capsys, "search", "const", "-m", "3")
    assert code == 0 and out.startswith("{{0},{1},{2}}") and "verified=true" in out
    code, out, _ = run(capsys, "search", "const", "-m", "3", "--bound", "2")
    assert code == 0 and out.strip() == "none within bound"
    assert run(capsys, "search", "parity", "--bound", "2^30")[0] == 3


def test_match(capsys):
    code, out, _ = run(capsys, "match", "half", "const")
    assert code == 0 and json.loads(out)["branch"] == "SecondCase"
    code, out, _ = run(capsys, "match", "hindman", "parity", "-m", "2")
    doc = json.loads(out)
    assert code == 0 and doc["branch"] == "MonochromaticFamily" and len(doc["families"]["S"]) == 2
    code, out, _ = run(capsys, "match", "full", "const", "-r", "1")
    assert code == 0 and json.loads(out)["branch"] == "MonochromaticFamily"
    assert run(capsys, "match", "half", "parity", "--extract", "--bound", "4")[0] == 4


def test_verify_and_replay(tmp_path, capsys):
    rep, table = tmp_path / "r.json", tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "c31:flip=5", "--claims", "s31-definition", "--bound", "2^8",
                       "--json", str(rep), "--csv", str(table))
    assert code == 1 and "violated" in out
    assert json.loads(rep.read_text())["report_version"] == 1
    assert table.read_text().startswith("coloring,")
    code, out, _ = run(capsys, "replay", str(rep))
    assert code == 1 and "reproduced" in out and "NOT" not in out


def test_verify_vacuous_and_usage(capsys):
    code, out, _ = run(capsys, "verify", "c32:k=1", "--catalog", "builtin:finite", "--claims", "s32-defeat")
    assert code == 0 and "verified" in out
    assert run(capsys, "verify", "c31", "--catalog", "builtin:nope")[0] == 2
    with pytest.raises(SystemExit):
        main(["frobnicate"])
