import json
from pathlib import Path

import jsonschema
import pytest

from dichro import cli
from dichro.digraph import parse_arc_list, write_arc_list
from dichro.transforms import make_hk

SCHEMA_DIR = Path(__file__).resolve().parent.parent / "src" / "dichro" / "schemas"
CORPUS = Path(__file__).resolve().parent.parent / "corpus"


def _schema(name: str) -> dict:
    return json.loads((SCHEMA_DIR / f"{name}.schema.json").read_text())


@pytest.fixture()
def h9_file(tmp_path):
    path = tmp_path / "h9.d"
    path.write_text(write_arc_list(make_hk(9)), encoding="ascii")
    return str(path)


def run_cli(args, capsys):
    code = cli.main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_chi_exact_headline(h9_file, capsys):
    code, out, _ = run_cli(["chi", h9_file, "--exact"], capsys)
    assert code == 0
    assert out.splitlines()[0] == "chi = 9"
    # colouring lines follow as `<vertex> <colour>`
    assert out.splitlines()[1].split() == ["0", str(int(out.splitlines()[1].split()[1]))]


def test_chi_json_schema(h9_file, capsys):
    code, out, _ = run_cli(["chi", h9_file, "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, _schema("chi"))
    assert payload["chi"] == 9


def test_chi_greedy(h9_file, capsys):
    code, out, _ = run_cli(["chi", h9_file, "--greedy", "--k", "10", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, _schema("chi"))
    assert payload["failed_at"] is None


def test_params_json_schema(h9_file, capsys):
    code, out, _ = run_cli(["params", h9_file, "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, _schema("params"))
    assert payload["delta_max"] == 9
    assert payload["delta_tilde_sq"] == 81
    assert payload["biclique_number"] == 8


def test_decompose_json_schema(capsys, tmp_path):
    path = tmp_path / "k.d"
    from dichro.transforms import complete_digraph

    path.write_text(write_arc_list(complete_digraph(20)), encoding="ascii")
    code, out, _ = run_cli(["decompose", str(path), "--d", "3", "--json"], capsys)
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, _schema("decompose"))
    assert payload["parts"] == [list(range(20))]
    assert payload["flags"]["small_delta_overlap"] is False


def test_simulate_json_schema_and_determinism(h9_file, capsys):
    args = ["simulate", h9_file, "--trials", "30", "--seed", "5", "--json"]
    code, out1, _ = run_cli(args, capsys)
    assert code == 0
    payload = json.loads(out1)
    jsonschema.validate(payload, _schema("simulate"))
    _, out2, _ = run_cli(args, capsys)
    assert out1 == out2  # identical config => identical bytes


def test_simulate_csv(h9_file, capsys):
    code, out, _ = run_cli(
        ["simulate", h9_file, "--trials", "4", "--seed", "1", "--csv"], capsys
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("trial,v_psi,extendable")
    assert len(lines) == 5
    first = lines[1].split(",")
    assert first[0] == "0" and first[2] in {"0", "1"}


def test_gen_round_trip(tmp_path, capsys):
    out_path = tmp_path / "h5.d"
    code, _, _ = run_cli(["gen", "hk", "--k", "5", "-o", str(out_path)], capsys)
    assert code == 0
    text = out_path.read_text(encoding="ascii")
    assert write_arc_list(parse_arc_list(text)) == text
    assert parse_arc_list(text) == make_hk(5)


def test_gen_obstruction_and_random(tmp_path, capsys):
    ob = tmp_path / "ob.d"
    code, _, _ = run_cli(
        ["gen", "obstruction", "--k", "5", "--sub-kind", "i", "--split", "2", "-o", str(ob)],
        capsys,
    )
    assert code == 0 and parse_arc_list(ob.read_text()).n == 5
    rnd = tmp_path / "r.d"
    code, _, _ = run_cli(
        ["gen", "random", "--n", "8", "--p-digon", "0.3", "--p-arc", "0.2",
         "--seed", "9", "-o", str(rnd)],
        capsys,
    )
    assert code == 0
    again = tmp_path / "r2.d"
    run_cli(
        ["gen", "random", "--n", "8", "--p-digon", "0.3", "--p-arc", "0.2",
         "--seed", "9", "-o", str(again)],
        capsys,
    )
    assert rnd.read_bytes() == again.read_bytes()


def test_reduce_and_transform(tmp_path, capsys):
    src = tmp_path / "c3.d"
    from dichro.transforms import directed_cycle

    src.write_text(write_arc_list(directed_cycle(3)), encoding="ascii")
    out = tmp_path / "red.d"
    code, _, _ = run_cli(["reduce", str(src), "--k", "2", "-o", str(out)], capsys)
    assert code == 0
    assert parse_arc_list(out.read_text()).n == 12
    code, text, _ = run_cli(["transform", "delta-min", str(src)], capsys)
    assert code == 0
    assert parse_arc_list(text).n == 3


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.d"
    bad.write_text("d 2 1\n0 0\n", encoding="ascii")
    code, _, err = run_cli(["chi", str(bad)], capsys)
    assert code == cli.EXIT_INPUT
    assert "line 2" in err


def test_capacity_error_exit_code(tmp_path, capsys):
    big = tmp_path / "big.d"
    from dichro.transforms import complete_digraph

    big.write_text(write_arc_list(complete_digraph(30)), encoding="ascii")
    code, _, err = run_cli(["chi", str(big)], capsys)
    assert code == cli.EXIT_CAPACITY
    assert "capacity" in err


def test_verify_corpus_green(capsys):
    code, out, err = run_cli(["verify", str(CORPUS), "--seed", "7"], capsys)
    assert code == 0
    assert "FAIL" not in out and err == ""


def test_verify_flags_non_canonical_file(tmp_path, capsys):
    scrambled = tmp_path / "scrambled.d"
    scrambled.write_text("d 3 2\n1 2\n0 1\n", encoding="ascii")  # out of order
    code, out, err = run_cli(["verify", str(tmp_path)], capsys)
    assert code == cli.EXIT_VIOLATION
    assert "violation" in err


def test_threads_flag_accepted(h9_file, capsys, monkeypatch):
    code, out, _ = run_cli(["--threads", "4", "params", h9_file], capsys)
    assert code == 0
    monkeypatch.setenv("DICHRO_THREADS", "2")
    code, _, _ = run_cli(["params", h9_file], capsys)
    assert code == 0
