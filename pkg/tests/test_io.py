import json
from fractions import Fraction

import numpy as np
import pytest

from tnrank import gallery, io
from tnrank.graph import cycle_graph
from tnrank.network import contract_network
from tnrank.scalars import GaussianRational as GR
from tnrank.tensor import Tensor, float_tensor, tensors_equal


def test_exact_tensor_roundtrip_with_fractions_and_imaginary_parts():
    arr = np.empty((2, 2), dtype=object)
    arr[0, 0] = GR(Fraction(1, 3), Fraction(-2, 7))
    arr[0, 1] = GR(0)
    arr[1, 0] = GR(5)
    arr[1, 1] = GR(Fraction(-9, 4), Fraction(1, 1))
    t = Tensor(arr, "exact")
    doc = io.tensor_to_json(t)
    back = io.tensor_from_json(json.loads(json.dumps(doc)))
    assert tensors_equal(back, t)
    # exactness survives: the third is stored as the string "1/3"
    assert any(e["re"] == "1/3" for e in doc["sparse"])


def test_float_tensor_roundtrip():
    rng = np.random.default_rng(0)
    t = float_tensor(rng.standard_normal((2, 3)) + 1j * rng.standard_normal((2, 3)))
    back = io.tensor_from_json(io.tensor_to_json(t))
    assert np.array_equal(back.data, t.data)


def test_dense_exact_document_is_accepted():
    doc = {
        "dims": [2],
        "scalar": "exact",
        "dense": [["1/2", "0"], ["-3", "1/5"]],
    }
    t = io.tensor_from_json(doc)
    assert t.item((1,)) == GR(Fraction(1, 2))
    assert t.item((2,)) == GR(-3, Fraction(1, 5))


def test_tensor_document_errors():
    with pytest.raises(ValueError):
        io.tensor_from_json({"dims": [2], "scalar": "exact"})
    with pytest.raises(ValueError):
        io.tensor_from_json({"dims": [2], "scalar": "weird", "dense": []})
    with pytest.raises(ValueError):
        io.tensor_from_json({"dims": [2], "scalar": "float", "dense": [[1, 0]]})


def test_graph_roundtrip_and_default_weight():
    g = cycle_graph(4)
    back = io.graph_from_json(io.graph_to_json(g))
    assert back == g
    g2 = io.graph_from_json({"d": 2, "edges": [[1, 2]]})
    assert g2.edges == ((1, 2, 1),)


def test_state_roundtrip():
    fx = gallery.w_state(3)
    back = io.state_from_json(json.loads(json.dumps(io.state_to_json(fx.ring))))
    assert back.edge_dims == fx.ring.edge_dims
    assert tensors_equal(contract_network(back), fx.tensor)


def test_cp_roundtrip():
    fx = gallery.ghz_state(4)
    back = io.cp_from_json(json.loads(json.dumps(io.cp_to_json(fx.cp))))
    assert back.rank == 2
    assert tensors_equal(back.to_tensor(), fx.tensor)


def test_report_lines_sorted(tmp_path):
    recs = [
        {"id": "b-claim", "status": "pass"},
        {"id": "a-claim", "status": "fail"},
    ]
    path = tmp_path / "report.jsonl"
    io.write_report_lines(recs, path=path)
    lines = path.read_text().splitlines()
    assert json.loads(lines[0])["id"] == "a-claim"
    assert json.loads(lines[1])["id"] == "b-claim"


def test_dump_is_deterministic(tmp_path):
    doc = io.tensor_to_json(gallery.w_state(3).tensor)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    io.dump(doc, p1)
    io.dump(doc, p2)
    assert p1.read_bytes() == p2.read_bytes()
