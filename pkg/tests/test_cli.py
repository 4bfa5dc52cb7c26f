import json
import subprocess
import sys

import pytest

from vpricer.cli import run

INTRO_DOC = {"items": [{"kind": "discrete", "values": [1, 2], "masses": [2 / 3, 1 / 3]}] * 2}
NONREG_DOC = {"items": [{"kind": "discrete", "values": [1, 2, 10], "masses": [0.5, 0.05, 0.45]}]}
UNIFORM_DOC = {"items": [{"kind": "uniform", "lo": 0, "hi": 1}] * 2}
BIG_DOC = {"items": [{"kind": "discrete", "values": list(range(1, 11)), "masses": [0.1] * 10}] * 8}


@pytest.fixture
def write(tmp_path):
    def _write(doc, name="inst.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)

    return _write


def _kv(text):
    return dict(line.split("\t", 1) for line in text.strip().splitlines())


def test_price_regular_intro(write, capsys):
    assert run(["price", write(INTRO_DOC), "--algo", "regular", "--exact"]) == 0
    out = _kv(capsys.readouterr().out)
    assert out["prices"] == "1,1"
    assert float(out["pricing_revenue"]) == pytest.approx(1.0)
    assert float(out["myerson_revenue"]) == pytest.approx(4 / 3)
    assert 1.0 <= float(out["ratio"]) <= 3.0
    assert out["pricing_method"] == "exact"


def test_price_json(write, capsys):
    assert run(["price", write(INTRO_DOC), "--algo", "nonregular", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["algorithm"] == "nonregular"
    assert len(doc["prices"]) == 2
    assert doc["ratio"] >= 1 - 1e-9


@pytest.mark.parametrize("algo", ["regular", "iid", "nonregular", "approx", "vickrey", "single"])
def test_every_algorithm_runs(write, capsys, algo):
    assert run(["price", write(INTRO_DOC), "--algo", algo]) == 0
    out = _kv(capsys.readouterr().out)
    assert float(out["ratio"]) >= 1 - 1e-9


def test_check_reports_witness(write, capsys):
    assert run(["check", write(NONREG_DOC)]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    header, row = lines[0].split("\t"), lines[1].split("\t")
    rec = dict(zip(header, row))
    assert rec["regular"] == "false"
    assert float(rec["witness"]) == 2.0


def test_bench_uniform(write, capsys):
    assert run(["bench", write(UNIFORM_DOC), "--algo", "iid", "--samples", "1000000", "--seed", "7"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    header = lines[0].split("\t")
    rows = {r.split("\t")[0]: dict(zip(header, r.split("\t"))) for r in lines[1:]}
    assert abs(float(rows["myerson"]["revenue"]) - 5 / 12) <= 0.003
    assert abs(float(rows["pricing_iid"]["revenue"]) - 3 / 8) <= 0.003
    assert rows["myerson"]["samples"] == "1000000"


def test_bench_exact_ratios(write, capsys):
    assert run(["bench", write(INTRO_DOC), "--algo", "regular"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    header = lines[0].split("\t")
    for r in lines[1:]:
        rec = dict(zip(header, r.split("\t")))
        assert float(rec["myerson_ratio"]) >= 1 - 1e-9
        if rec["mechanism"] == "pricing_regular":
            assert float(rec["myerson_ratio"]) <= 3


def test_eval(write, capsys):
    assert run(["eval", write(INTRO_DOC), "--prices", "1,2"]) == 0
    out = _kv(capsys.readouterr().out)
    assert float(out["pricing_revenue"]) == pytest.approx(11 / 9)


def test_iron_and_curve(write, capsys):
    path = write(NONREG_DOC)
    assert run(["iron", path]) == 0
    iron_out = capsys.readouterr().out.splitlines()
    assert iron_out[0] == "item\talpha\trbar\tphibar_right"
    assert len(iron_out) == 4
    assert run(["curve", path]) == 0
    curve_out = capsys.readouterr().out.splitlines()
    assert curve_out[0].startswith("item\tvalue")
    assert len(curve_out) == 4


def test_bruteforce_json_and_tsv(write, capsys):
    path = write(INTRO_DOC)
    assert run(["bruteforce", path]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["best_revenue"] == pytest.approx(11 / 9)
    assert doc["best_pricing"] == [1.0, 2.0]
    assert run(["bruteforce", path, "--tsv"]) == 0
    assert _kv(capsys.readouterr().out)["candidates_evaluated"] == "16"


def test_exit_codes(write, capsys):
    assert run(["nonsense"]) == 2
    assert run(["price", write(INTRO_DOC), "--bogus"]) == 2
    assert run(["price", "/no/such/file.json"]) == 2
    assert run(["price", write('{"items": [{"kind": "discrete", "values": [1, 2], "masses": [0.5, 0.4]}]}')]) == 2
    assert run(["price", write(UNIFORM_DOC), "--exact"]) == 2
    assert run(["eval", write(INTRO_DOC), "--prices", "1"]) == 2
    assert run(["price", write(INTRO_DOC), "--samples", "0"]) == 2
    assert run(["bruteforce", write(BIG_DOC)]) == 3
    assert run(["price", write(BIG_DOC), "--exact"]) == 3
    err = capsys.readouterr().err
    assert "masses sum" in err


def test_regular_algo_on_nonregular_is_a_validation_error(write):
    assert run(["price", write(NONREG_DOC), "--algo", "regular"]) == 2


def test_byte_identical_reports(write):
    path = write({"items": [{"kind": "uniform", "lo": 1, "hi": 2}, {"kind": "exp_trunc", "rate": 1, "lo": 1, "hi": 3}]})
    cmd = [sys.executable, "-m", "vpricer", "bench", path, "--algo", "vickrey", "--samples", "200000", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=True)
    b = subprocess.run(cmd, capture_output=True, text=True, check=True, env={"VPRICER_THREADS": "1", "PATH": ""})
    assert a.stdout == b.stdout
    assert "wall_time_s" in a.stderr and "wall_time_s" not in a.stdout
