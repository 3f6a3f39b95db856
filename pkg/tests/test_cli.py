import json

import pytest

import medianjn as mj
from medianjn.cli import main


@pytest.fixture()
def fixtures(tmp_path):
    sp = mj.grid_space(1, 2)
    space_path = tmp_path / "two_point.json"
    space_path.write_text(json.dumps(mj.space_to_json(sp)))
    f = mj.SampleFunction.from_values(sp, [0.0, 1.0])
    fn_path = tmp_path / "f01.json"
    fn_path.write_text(json.dumps(f.to_json(sp)))
    return str(space_path), str(fn_path)


def test_median_command(fixtures, capsys):
    space, func = fixtures
    code = main(["median", "--space", space, "--function", func, "--s", "0.5", "--set", "all"])
    assert code == 0
    assert capsys.readouterr().out.strip() == "1"


def test_jn_median_exact(fixtures, capsys):
    space, func = fixtures
    code = main(["jn-median", "--space", space, "--function", func,
                 "--p", "2", "--s", "0.5", "--mode", "exact", "--output", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["norm"] == pytest.approx(0.7071067811865476, rel=1e-12)
    assert payload["mode"] == "exact"


def test_text_and_json_agree(fixtures, capsys):
    space, func = fixtures
    main(["bmo", "--space", space, "--function", func, "--s", "0.5", "--output", "json"])
    as_json = json.loads(capsys.readouterr().out)["bmo"]
    main(["bmo", "--space", space, "--function", func, "--s", "0.5"])
    as_text = float(capsys.readouterr().out.strip())
    assert as_text == pytest.approx(as_json, rel=1e-12)


def test_unknown_flag_exits_2(fixtures, capsys):
    space, func = fixtures
    code = main(["median", "--space", space, "--function", func, "--s", "0.5", "--bogus"])
    assert code == 2


def test_unknown_command_exits_2(capsys):
    assert main(["no-such-command"]) == 2


def test_bad_input_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["doubling", "--space", str(bad)]) == 2


def test_generate_roundtrip(tmp_path, capsys):
    out_space = tmp_path / "space.json"
    assert main(["generate", "--kind", "grid-space", "--dim", "1", "--n", "5",
                 "--out", str(out_space)]) == 0
    out_fn = tmp_path / "fn.json"
    assert main(["generate", "--kind", "two_valued", "--space", str(out_space),
                 "--seed", "2", "--out", str(out_fn)]) == 0
    capsys.readouterr()
    code = main(["median", "--space", str(out_space), "--function", str(out_fn),
                 "--s", "0.5"])
    assert code == 0
    float(capsys.readouterr().out.strip())


def test_oscillation_modes(fixtures, capsys):
    space, func = fixtures
    assert main(["oscillation", "--space", space, "--function", func, "--s", "0.5",
                 "--output", "json"]) == 0
    med = json.loads(capsys.readouterr().out)
    assert med["oscillation"] == pytest.approx(0.5, rel=1e-12)
    assert main(["oscillation", "--space", space, "--function", func, "--q", "2",
                 "--output", "json"]) == 0
    integ = json.loads(capsys.readouterr().out)
    assert integ["oscillation"] == pytest.approx(0.25, abs=1e-10)


def test_verify_all_subset(capsys):
    code = main(["verify-all", "--criteria", "3,7", "--output", "json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["pass"] is True
    assert [c["id"] for c in payload["cases"]] == ["C03", "C07"]


def test_verify_all_worker_determinism(capsys):
    main(["verify-all", "--criteria", "3,7", "--output", "json", "--workers", "1"])
    one = capsys.readouterr().out
    main(["verify-all", "--criteria", "3,7", "--output", "json", "--workers", "3"])
    three = capsys.readouterr().out
    assert one == three
