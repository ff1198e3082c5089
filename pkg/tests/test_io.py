from __future__ import annotations

import json

import numpy as np
import pytest

from attainable import io
from attainable.errors import ParseError
from attainable.generate import random_network
from attainable.integrate import IntegratorConfig, integrate
from attainable.network import build_vector_field


def test_network_round_trip(tmp_path):
    net = random_network(3, 4, 2, seed=9)
    path = io.write_network(net, tmp_path / "n.json")
    assert io.read_network(path) == net
    assert io.read_network(path).edges == net.edges  # rates survive bit for bit


def test_field_round_trip(cubic_triple):
    data = json.loads(json.dumps(io.field_to_json(cubic_triple.field)))
    assert io.field_from_json(data).components == cubic_triple.field.components


def test_fixtures_load(branching, triangle, quad_pair, pinned_quad, cubic_triple):
    assert branching.network is not None and branching.x0 is None
    assert triangle.x0.tolist() == [2, 3, 5]
    assert quad_pair.network is None and quad_pair.x0.tolist() == [10, 8, 9, 2]
    assert pinned_quad.x0.tolist() == [5, 8, 6, 2]
    assert cubic_triple.field.species_count == 6
    realized = io.load_fixture("quad_pair_network")
    assert build_vector_field(realized.network).components == quad_pair.field.components


def test_unknown_fixture():
    with pytest.raises(FileNotFoundError, match="triangle"):
        io.load_fixture("nope")


@pytest.mark.parametrize(
    "doc,where",
    [
        ({"complexes": [], "edges": []}, "species"),
        ({"species": "3", "complexes": [], "edges": []}, "species"),
        ({"species": 2, "complexes": [[1, 0], [0]], "edges": []}, "complexes[1]"),
        ({"species": 2, "complexes": [[1, 0], [0, -1]], "edges": []}, "complexes[1][1]"),
        ({"species": 2, "complexes": [[1, 0], [0, 1]], "edges": [{"from": 0, "to": 1}]}, "edges[0].rate"),
        ({"species": 2, "complexes": [[1, 0], [0, 1]], "edges": [{"from": 0, "to": 1, "rate": "x"}]}, "edges[0].rate"),
        ({"species": 2, "complexes": [[1, 0], [0, 1]], "edges": [{"from": 0, "to": 1, "rate": 1}, 7]}, "edges[1]"),
        ({"species": 2, "complexes": [[1, 0], [0, 1]], "edges": [{"from": 0, "to": 0, "rate": 1}]}, "network"),
        ({"species": 2, "equations": ["x1", "x5"]}, "equations[1]"),
        ({"species": 2, "equations": ["x1"]}, "equations"),
        ({"species": 1, "equations": ["x1"], "x0": [1, 2]}, "x0"),
        ({"species": 1}, "<root>"),
    ],
)
def test_parse_errors_name_the_field(doc, where, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(ParseError) as err:
        io.read_system(path)
    assert err.value.location == where
    assert str(err.value).startswith(where)


def test_json_syntax_error_names_the_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "species": 2,\n  "complexes": [,]\n}\n')
    with pytest.raises(ParseError, match="line 3"):
        io.read_network(path)


def test_trajectory_csv_round_trip(quad_pair, tmp_path):
    traj = integrate(quad_pair.field, quad_pair.x0, IntegratorConfig(max_time=0.2))
    path = io.write_trajectory(traj, tmp_path / "t.csv")
    assert path.read_text().splitlines()[0] == "t,x1,x2,x3,x4,dx1,dx2,dx3,dx4"
    back = io.read_trajectory(path)
    assert np.array_equal(back.points, traj.points)
    assert np.array_equal(back.tangents, traj.tangents)
    assert np.array_equal(back.times, traj.times)


@pytest.mark.parametrize(
    "text,where",
    [
        ("", "line 1"),
        ("t,x1\n0,1\n", "line 1"),
        ("t,x1,dy1\n0,1,2\n", "line 1"),
        ("t,x1,dx1\n", "line 2"),
        ("t,x1,dx1\n0,1,2\n1,2\n", "line 3"),
        ("t,x1,dx1\n0,1,2\n1,abc,2\n", "line 3"),
    ],
)
def test_trajectory_parse_errors(text, where, tmp_path):
    path = tmp_path / "t.csv"
    path.write_text(text)
    with pytest.raises(ParseError) as err:
        io.read_trajectory(path)
    assert err.value.location == where
