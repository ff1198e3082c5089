"""JSON and CSV formats for networks, vector fields and trajectories.

Every reader reports problems as :class:`ParseError` naming the offending
field path (``edges[3].rate``) or line (``line 17``).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .integrate import Trajectory
from .network import ReactionNetwork, build_vector_field
from .polynomial import PolynomialVectorField, format_polynomial, parse_polynomial

FIXTURE_DIR = Path(__file__).parent / "fixtures"


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise ParseError("expected an object", where or "<root>")
    if key not in obj:
        raise ParseError("missing field", f"{where}.{key}" if where else key)
    return obj[key]


def _int(value, where: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"expected an integer, got {value!r}", where)
    if minimum is not None and value < minimum:
        raise ParseError(f"must be >= {minimum}, got {value}", where)
    return value


def _float(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"expected a number, got {value!r}", where)
    return float(value)


def _load_json(source) -> dict:
    if isinstance(source, dict):
        return source
    text = Path(source).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None


# -- networks -----------------------------------------------------------------


def network_from_json(data: dict) -> ReactionNetwork:
    s = _int(_require(data, "species", ""), "species", 1)
    raw_complexes = _require(data, "complexes", "")
    if not isinstance(raw_complexes, list):
        raise ParseError("expected a list", "complexes")
    complexes = []
    for k, c in enumerate(raw_complexes):
        where = f"complexes[{k}]"
        if not isinstance(c, list) or len(c) != s:
            raise ParseError(f"expected a list of {s} exponents", where)
        complexes.append([_int(e, f"{where}[{i}]", 0) for i, e in enumerate(c)])
    raw_edges = _require(data, "edges", "")
    if not isinstance(raw_edges, list):
        raise ParseError("expected a list", "edges")
    edges = []
    for k, e in enumerate(raw_edges):
        where = f"edges[{k}]"
        i = _int(_require(e, "from", where), f"{where}.from", 0)
        j = _int(_require(e, "to", where), f"{where}.to", 0)
        rate = _float(_require(e, "rate", where), f"{where}.rate")
        edges.append((i, j, rate))
    allow_zero = bool(data.get("allow_zero_complex", False))
    try:
        return ReactionNetwork.build(s, complexes, edges, allow_zero_complex=allow_zero)
    except ValueError as exc:
        raise ParseError(str(exc), "network") from None


def network_to_json(net: ReactionNetwork) -> dict:
    out = {
        "species": net.species_count,
        "complexes": [list(c.exponents) for c in net.complexes],
        "edges": [{"from": r.source, "to": r.target, "rate": r.rate} for r in net.edges],
    }
    if net.allow_zero_complex:
        out["allow_zero_complex"] = True
    return out


def read_network(path) -> ReactionNetwork:
    return network_from_json(_load_json(path))


def write_network(net: ReactionNetwork, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(network_to_json(net), indent=2) + "\n")
    return path


# -- vector fields ------------------------------------------------------------


def field_from_json(data: dict) -> PolynomialVectorField:
    """``{"species": s, "equations": ["-2*x1^2 + ...", ...]}``."""
    s = _int(_require(data, "species", ""), "species", 1)
    eqs = _require(data, "equations", "")
    if not isinstance(eqs, list) or len(eqs) != s:
        raise ParseError(f"expected a list of {s} equations", "equations")
    comps = []
    for k, text in enumerate(eqs):
        if not isinstance(text, str):
            raise ParseError("expected a string", f"equations[{k}]")
        try:
            comps.append(parse_polynomial(text, s))
        except ValueError as exc:
            raise ParseError(str(exc), f"equations[{k}]") from None
    return PolynomialVectorField(s, tuple(comps))


def field_to_json(field: PolynomialVectorField) -> dict:
    return {"species": field.species_count, "equations": [format_polynomial(p) for p in field.components]}


@dataclass(frozen=True)
class System:
    """A loaded input: the field, the network if one was given, and an optional start point."""

    field: PolynomialVectorField
    network: ReactionNetwork | None = None
    x0: np.ndarray | None = None
    name: str = ""


def system_from_json(data: dict) -> System:
    """Accept a network document, a field document, or a fixture holding either plus ``x0``."""
    if "edges" in data:
        net = network_from_json(data)
        field = build_vector_field(net)
    elif "equations" in data:
        net = None
        field = field_from_json(data)
    else:
        raise ParseError("need either 'edges' (network) or 'equations' (vector field)", "<root>")
    x0 = None
    if "x0" in data:
        raw = data["x0"]
        if not isinstance(raw, list) or len(raw) != field.species_count:
            raise ParseError(f"expected a list of {field.species_count} numbers", "x0")
        x0 = np.array([_float(v, f"x0[{i}]") for i, v in enumerate(raw)])
    return System(field, net, x0, str(data.get("name", "")))


def read_system(path) -> System:
    return system_from_json(_load_json(path))


def load_fixture(name: str) -> System:
    """Load a bundled fixture by stem, e.g. ``"quad_pair"``."""
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        known = sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))
        raise FileNotFoundError(f"no fixture {name!r}; available: {', '.join(known)}")
    return read_system(path)


# -- trajectories -------------------------------------------------------------


def trajectory_header(s: int) -> list[str]:
    return ["t"] + [f"x{i + 1}" for i in range(s)] + [f"dx{i + 1}" for i in range(s)]


def write_trajectory(traj: Trajectory, path) -> Path:
    path = Path(path)
    s = traj.species_count
    data = np.hstack([traj.times[:, None], traj.points, traj.tangents])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(trajectory_header(s)) + "\n")
        np.savetxt(fh, data, fmt="%.17g", delimiter=",")
    return path


def read_trajectory(path) -> Trajectory:
    path = Path(path)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise ParseError("empty file", "line 1")
    header = [h.strip() for h in rows[0]]
    if len(header) < 3 or (len(header) - 1) % 2:
        raise ParseError("header must be t,x1..xs,dx1..dxs", "line 1")
    s = (len(header) - 1) // 2
    if header != trajectory_header(s):
        raise ParseError(f"header must be {','.join(trajectory_header(s))}", "line 1")
    values = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != len(header):
            raise ParseError(f"expected {len(header)} columns, got {len(row)}", f"line {lineno}")
        try:
            values.append([float(v) for v in row])
        except ValueError:
            raise ParseError("non-numeric value", f"line {lineno}") from None
    if not values:
        raise ParseError("no data rows", "line 2")
    arr = np.array(values)
    try:
        return Trajectory(arr[:, 0].copy(), arr[:, 1 : s + 1].copy(), arr[:, s + 1 :].copy())
    except ValueError as exc:
        raise ParseError(str(exc), str(path)) from None
