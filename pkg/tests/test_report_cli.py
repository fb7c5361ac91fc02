import json

import pytest
from hypothesis import given, strategies as st

from vpflows.cli import main
from vpflows.report import INFORMATIVE, Block, RunReport, dumps

json_leaf = st.one_of(st.none(), st.booleans(), st.integers(-10**12, 10**12),
                      st.floats(allow_nan=False, allow_infinity=False), st.text(max_size=8))
json_tree = st.recursive(json_leaf, lambda c: st.one_of(st.lists(c, max_size=4),
                                                        st.dictionaries(st.text(max_size=6), c, max_size=4)),
                         max_leaves=20)


@given(json_tree)
def test_dumps_round_trips_byte_identically(obj):
    text = dumps(obj)
    assert dumps(json.loads(text)) == text


def test_dumps_uses_17_digits_and_sorted_keys():
    text = dumps({"b": 0.1, "a": [1.0, float("nan")]})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text and '"NaN"' in text
    assert dumps(-0.0) == "-0.0\n" and dumps(1.0) == "1.0\n" and dumps(1) == "1\n"


def test_block_pass_values():
    assert Block("x", {}, {}, {}, {}, INFORMATIVE).passed == INFORMATIVE
    assert Block("x", {}, {}, {}, {}, 1).passed is True


def test_report_round_trip_and_exit_code():
    rep = RunReport("0.1.0", "suite demo", "sha256:00", 7)
    rep.add("good", {"a": 1}, {"v": 0.5}, {"v": 0.5}, {"abs": 1e-9}, True)
    rep.add("info", {}, {"v": 2.0}, {}, {}, INFORMATIVE)
    assert rep.exit_code == 0
    text = rep.to_json()
    assert RunReport.from_json(text).to_json() == text
    rep.add("bad", {}, {"v": 1.0}, {"v": 0.0}, {"abs": 0.1}, False)
    assert rep.exit_code == 1 and rep.failed == ["bad"]


@pytest.fixture
def tube_file(tmp_path):
    path = tmp_path / "tube.json"
    path.write_text(json.dumps({"type": "toric_tube", "F": {"const": 0.0}, "G": {"const": 1.0},
                                "class_start": [0, 1], "frame_offset": [0, 2]}))
    return path


def test_cli_invariants_tube(tube_file, tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["invariants", "--model", str(tube_file), "--horizon", "25", "--out", str(out)]) == 0
    rep = json.loads((out / "report.json").read_text())
    blocks = {b["name"]: b for b in rep["blocks"]}
    assert blocks["helicity.wedge"]["measured"]["value"] == pytest.approx(1.0, abs=1e-12)
    assert blocks["ruelle.closed_vs_numeric"]["measured"]["value"] == pytest.approx(2.0, abs=1e-12)
    assert (out / "series" / "ruelle_samples.csv").read_text().startswith("t,x,y,ru_T")
    assert "wall time" in capsys.readouterr().err


def test_cli_horizon_error_shrinks(tmp_path):
    path = tmp_path / "tube.json"
    path.write_text(json.dumps({"type": "toric_tube", "F": {"const": 1.0, "sin": [0.5]}, "G": {"const": 1.0}}))
    errs = []
    for T in ("25", "100"):
        out = tmp_path / T
        assert main(["invariants", "--model", str(path), "--horizon", T, "--out", str(out)]) == 0
        rep = json.loads((out / "report.json").read_text())
        ru = [b for b in rep["blocks"] if b["name"] == "ruelle.closed_vs_numeric"][0]
        errs.append(abs(ru["measured"]["error"]))
    assert errs[1] < errs[0] / 2


def test_cli_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert main(["invariants", "--model", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["suite", "nonsense"]) == 2
    assert main(["invariants"]) == 2
    assert main(["suite", "localfn", "--eps-list", "a,b"]) == 2


def test_cli_suite_localfn_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["suite", "localfn", "--seed", "3", "--out", str(a)]) == 0
    assert main(["suite", "localfn", "--seed", "3", "--out", str(b)]) == 0
    assert (a / "report.json").read_bytes() == (b / "report.json").read_bytes()


def test_cli_help_documents_csv_columns(capsys):
    with pytest.raises(SystemExit):
        from vpflows.cli import build_parser
        build_parser().parse_args(["suite", "--help"])
    assert "eps,delta_h,delta_h_end_fixed" in capsys.readouterr().out
