import json

import jsonschema
import pytest

from tnrank import io
from tnrank.cli import main


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _write_graph(path, d, edges):
    io.dump({"d": d, "edges": edges}, path)


def test_rank_command_on_w3(workdir, capsys):
    assert main(["gallery", "w", "--d", "3", "--out", "w3.json"]) == 0
    _write_graph("p3.json", 3, [[1, 2], [2, 3]])
    capsys.readouterr()
    assert main(["rank", "w3.json", "p3.json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["rank"] == [2, 2]
    assert doc["edges"][0]["shape"] == [2, 4]


def test_rank_rejects_cyclic_graph(workdir, capsys):
    main(["gallery", "w", "--d", "3", "--out", "w3.json"])
    _write_graph("c3.json", 3, [[1, 2], [2, 3], [1, 3]])
    code = main(["rank", "w3.json", "c3.json"])
    assert code == 2
    assert "fit" in capsys.readouterr().err


def test_decompose_contract_roundtrip(workdir, capsys):
    main(["gallery", "ghz", "--d", "4", "--out", "ghz4.json"])
    _write_graph("p4.json", 4, [[1, 2], [2, 3], [3, 4]])
    assert main(["decompose", "ghz4.json", "p4.json", "--out", "state.json"]) == 0
    assert main(["contract", "state.json", "--out", "back.json"]) == 0
    assert json.load(open("ghz4.json")) == json.load(open("back.json"))


def test_embed_order_mismatch_fails(workdir, capsys):
    main(["gallery", "w", "--d", "3", "--what", "cp", "--out", "w3cp.json"])
    _write_graph("k4.json", 4, [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]])
    assert main(["embed", "w3cp.json", "k4.json", "--out", "st.json"]) == 1
    assert "3" in capsys.readouterr().err


def test_embed_roundtrip(workdir):
    main(["gallery", "strassen", "--m", "2", "--n", "2", "--p", "2", "--out", "mu.json"])
    main(["gallery", "strassen", "--what", "cp", "--out", "mucp.json"])
    _write_graph("c3.json", 3, [[1, 2], [2, 3], [1, 3]])
    assert main(["embed", "mucp.json", "c3.json", "--out", "st.json"]) == 0
    assert main(["contract", "st.json", "--out", "back.json"]) == 0
    assert json.load(open("mu.json")) == json.load(open("back.json"))


def test_dim_command_records_conflict(workdir, capsys):
    _write_graph("c3.json", 3, [[1, 2], [2, 3], [1, 3]])
    assert (
        main(
            [
                "dim",
                "--graph", "c3.json",
                "--edge-dims", "2,2,2",
                "--vertex-dims", "4,4,4",
                "--seeds", "0,1,2",
            ]
        )
        == 0
    )
    doc = json.loads(capsys.readouterr().out)
    assert doc["formula_value"] == 37
    assert doc["alt_values"]["mps_minus_one"] == 36
    assert doc["jacobian_estimate"] == 37


def test_fit_command(workdir, capsys):
    main(["gallery", "ghz", "--d", "3", "--out", "ghz3.json"])
    _write_graph("c3.json", 3, [[1, 2], [2, 3], [1, 3]])
    capsys.readouterr()
    assert (
        main(
            [
                "fit", "ghz3.json",
                "--graph", "c3.json",
                "--edge-dims", "1,2,2",
                "--restarts", "5",
                "--seed", "0",
                "--trace",
            ]
        )
        == 0
    )
    doc = json.loads(capsys.readouterr().out)
    assert doc["relative_residual"] < 1e-6
    assert len(doc["residual_history"]) == 5


def test_missing_file_fails(workdir, capsys):
    _write_graph("p3.json", 3, [[1, 2], [2, 3]])
    assert main(["rank", "nope.json", "p3.json"]) == 1


def test_verify_filter_report_schema_and_determinism(workdir, capsys):
    import importlib.resources as resources

    schema = json.loads(
        resources.files("tnrank.schemas").joinpath("verify_report.schema.json").read_text()
    )
    assert main(["verify", "--filter", "parameter-report", "--out", "r1.jsonl"]) == 0
    capsys.readouterr()
    assert main(["verify", "--filter", "parameter-report", "--out", "r2.jsonl"]) == 0
    b1, b2 = open("r1.jsonl", "rb").read(), open("r2.jsonl", "rb").read()
    assert b1 == b2
    for line in b1.decode().splitlines():
        jsonschema.validate(json.loads(line), schema)


def test_mode_flag_converts_to_float(workdir, capsys):
    main(["gallery", "w", "--d", "3", "--out", "w3.json"])
    _write_graph("p3.json", 3, [[1, 2], [2, 3]])
    capsys.readouterr()
    assert main(["rank", "w3.json", "p3.json", "--mode", "float"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["mode"] == "float"
    assert doc["rank"] == [2, 2]


def test_threads_env_does_not_change_results(workdir, monkeypatch, capsys):
    from tnrank import verify

    serial = verify.run_claims("parameter-report")
    monkeypatch.setenv("TNRANK_THREADS", "2")
    parallel = verify.run_claims("parameter-report")
    assert serial == parallel


def test_gallery_monomial_and_border(workdir, capsys):
    assert main(["gallery", "monomial", "--exponents", "2,1", "--out", "m.json"]) == 0
    assert main(["gallery", "border", "--d", "3", "--n", "2", "--out", "b.json"]) == 0
    doc = json.load(open("b.json"))
    assert doc["dims"] == [4, 4, 4]
