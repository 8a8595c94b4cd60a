import json

import pytest

from idnc import cli
from idnc.graph import delivery_weight
from idnc.verify import check_clique_equivalence, run_all

TOY = {"M": 4, "has": [[1, 2], [3], [1, 3, 4]], "p": [0.0, 0.0, 0.0]}


@pytest.fixture
def toy_config(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"scenario": TOY, "iterations": 1}))
    return path


def test_verify_passes(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.count("PASS") == 6


def test_mutated_weight_breaks_equivalence():
    mutated = lambda u, m, M: (M - m) / (1.0 - u.erasure_prob)
    assert not check_clique_equivalence(weight=mutated).passed
    checks = run_all(weight=mutated)
    assert [c.name for c in checks if not c.passed] == ["clique-vs-exhaustive"]
    assert check_clique_equivalence(weight=delivery_weight).passed


def test_verify_exit_code_on_failure(monkeypatch, capsys):
    from idnc import verify

    original = verify.run_all
    monkeypatch.setattr(verify, "run_all", lambda: original(weight=lambda u, m, M: float(M - m)))
    assert cli.main(["verify"]) == 1
    assert "FAIL" in capsys.readouterr().out


def test_simulate_trace(toy_config, capsys):
    assert cli.main(["simulate", "--config", str(toy_config), "--policy", "min-adt", "--seed", "3", "--trace"]) == 0
    record = json.loads(capsys.readouterr().out)
    assert record["seed"] == 3
    assert record["trace"][0]["combination"] == [2, 3]
    assert record["overall_delivery_time"] == 7


def test_simulate_summary(capsys):
    assert cli.main(["simulate", "--preset", "tiny", "--iterations", "3", "--policy", "round-robin"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("round-robin: delivery")


def test_sweep_writes_files(tmp_path, capsys):
    out = tmp_path / "out"
    rc = cli.main([
        "sweep", "--preset", "tiny", "--iterations", "2", "--axis", "P",
        "--values", "0.1", "0.3", "--out", str(out), "--policy", "min-adt",
    ])
    assert rc == 0
    assert sorted(p.name for p in out.iterdir()) == [
        "sweep_P.csv", "sweep_P_completion.svg", "sweep_P_delivery.svg", "sweep_P_manifest.json",
    ]
    man = json.loads((out / "sweep_P_manifest.json").read_text())
    assert man["values"] == [0.1, 0.3]
    assert man["config"]["policies"] == ["min-adt"]


def test_graph_dot(toy_config, tmp_path):
    dot = tmp_path / "g.dot"
    assert cli.main(["graph", "--config", str(toy_config), "--dot", str(dot)]) == 0
    text = dot.read_text()
    assert 'label="u2_m1 w=4"' in text
    assert text.count(" -- ") == 6


def test_bad_config_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"U": 0}))
    assert cli.main(["simulate", "--config", str(bad)]) == 2
    assert "idnc:" in capsys.readouterr().err
    missing = tmp_path / "nope.json"
    assert cli.main(["graph", "--config", str(missing)]) == 2


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["sweep", "--axis", "Z", "--values", "1", "--out", "x"])
    assert exc.value.code == 2
