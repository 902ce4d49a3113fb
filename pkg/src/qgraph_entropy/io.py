"""Graph description files, experiment files and CSV writers.

Graph files are YAML (JSON is accepted too, being a subset)::

    vertices: 5                 # optional; defaults to max index + 1
    edges:
      - [0, 1, 1.0]             # [i, j, length]
      - [0, 2, 1.3]
    conditions:
      default: neumann          # optional, applies to vertices not listed
      0: equitransmitting       # "neumann" | "equitransmitting" | explicit matrix
      3: [[[0, 0], [1, 0]],     # explicit: rows of [re, im] pairs
          [[1, 0], [0, 0]]]

Every vertex must end up with a condition, its degree must match the
matrix size and explicit matrices must be unitary to 1e-12.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np
import yaml

from .errors import (DegreeMismatch, DisconnectedGraph, DuplicateEdge, GraphError, LoopEdge, MissingCondition,
                     NonpositiveLength, ParseError, UnsupportedDegree, ValidationError)
from .graph import MetricGraph, build_metric_graph
from .scattering import VertexConditions, build_conditions

_GRAPH_INVARIANTS = (
    (DisconnectedGraph, "connectivity"),
    (LoopEdge, "no loops"),
    (DuplicateEdge, "no multiple edges"),
    (NonpositiveLength, "positive length"),
    (GraphError, "graph structure"),
)


def _load(path):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ParseError(f"malformed file {path}: {getattr(exc, 'problem', exc)}",
                         line=mark.line + 1 if mark else None) from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be a mapping", line=1)
    return data, node


def _line_of(node, key):
    """1-based line of ``key`` in a composed top-level mapping node."""
    if isinstance(node, yaml.MappingNode):
        for k, _ in node.value:
            if str(k.value) == str(key):
                return k.start_mark.line + 1
    return None


def _item_line(node, key, index):
    if isinstance(node, yaml.MappingNode):
        for k, v in node.value:
            if str(k.value) == str(key) and isinstance(v, (yaml.SequenceNode, yaml.MappingNode)):
                items = v.value
                if index < len(items):
                    item = items[index]
                    return (item[0] if isinstance(item, tuple) else item).start_mark.line + 1
    return None


def _parse_matrix(raw, field, line):
    try:
        rows = [[complex(float(re), float(im)) for re, im in row] for row in raw]
        m = np.array(rows, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ParseError("explicit matrix must be a list of rows of [re, im] pairs", line=line, field=field) from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParseError(f"explicit matrix must be square, got shape {m.shape}", line=line, field=field)
    return m


def parse_graph_file(path) -> tuple[MetricGraph, VertexConditions]:
    data, node = _load(path)
    if "edges" not in data:
        raise ParseError("missing required field", field="edges")
    edges = data["edges"]
    if not isinstance(edges, list) or not edges:
        raise ParseError("edges must be a nonempty list of [i, j, length]", line=_line_of(node, "edges"), field="edges")
    parsed = []
    for k, e in enumerate(edges):
        line = _item_line(node, "edges", k)
        if not isinstance(e, (list, tuple)) or len(e) != 3:
            raise ParseError(f"edge {k} must be [i, j, length]", line=line, field=f"edges[{k}]")
        try:
            i, j, length = int(e[0]), int(e[1]), float(e[2])
        except (TypeError, ValueError) as exc:
            raise ParseError(f"edge {k} has non-numeric entries", line=line, field=f"edges[{k}]") from exc
        if i != e[0] or j != e[1]:
            raise ParseError(f"edge {k} vertex indices must be integers", line=line, field=f"edges[{k}]")
        parsed.append((i, j, length))

    vertices = data.get("vertices")
    if vertices is not None and (not isinstance(vertices, int) or isinstance(vertices, bool) or vertices < 1):
        raise ParseError("vertices must be a positive integer", line=_line_of(node, "vertices"), field="vertices")
    try:
        g = build_metric_graph(parsed, vertex_count=vertices)
    except GraphError as exc:
        invariant = next(name for cls, name in _GRAPH_INVARIANTS if isinstance(exc, cls))
        raise ValidationError(invariant, str(exc)) from exc

    raw = data.get("conditions", {})
    if isinstance(raw, str):
        raw = {"default": raw}
    if not isinstance(raw, dict):
        raise ParseError("conditions must be a mapping", line=_line_of(node, "conditions"), field="conditions")
    cnode = None
    if isinstance(node, yaml.MappingNode):
        cnode = next((v for k, v in node.value if k.value == "conditions"), None)
    default = raw.get("default")
    spec = {}
    for key, value in raw.items():
        if key == "default":
            continue
        line = _line_of(cnode, key)
        try:
            v = int(key)
        except (TypeError, ValueError) as exc:
            raise ParseError(f"condition key {key!r} is not a vertex index", line=line, field="conditions") from exc
        if not 0 <= v < g.V:
            raise ValidationError("vertex range", f"condition for vertex {v} but graph has {g.V} vertices")
        spec[v] = value if isinstance(value, str) else _parse_matrix(value, f"conditions[{key}]", line)
    for v in range(g.V):
        if v not in spec:
            if default is None:
                raise ValidationError("missing condition", f"vertex {v} has no condition and no default is given")
            spec[v] = default
    try:
        conds = build_conditions(g, spec)
    except UnsupportedDegree as exc:
        raise ValidationError("unsupported degree", str(exc)) from exc
    except (DegreeMismatch, MissingCondition) as exc:
        raise ValidationError("degree", str(exc)) from exc
    except ValidationError:
        raise
    except ValueError as exc:
        raise ValidationError("condition type", str(exc)) from exc
    return g, conds


def load_experiment(path) -> dict:
    """Experiment file for the ``ensemble`` command (YAML mapping).

    Keys: ``family`` (star | regular), ``size``, ``degree``, ``condition``,
    ``lengths: [l_min, l_max]``, ``seed``, ``kappa_window: [kmin, kmax]``,
    ``alphas``, ``s_values``, ``n_graphs``, and optionally ``trend_sizes``.
    """
    data, node = _load(path)
    known = {"family", "size", "degree", "condition", "lengths", "seed", "kappa_window",
             "alphas", "s_values", "n_graphs", "grid_step", "tol", "trend_sizes"}
    unknown = set(data) - known
    if unknown:
        key = sorted(unknown)[0]
        raise ParseError(f"unknown field {key!r}", line=_line_of(node, key), field=key)
    for key in ("lengths", "kappa_window"):
        if key in data and (not isinstance(data[key], list) or len(data[key]) != 2):
            raise ParseError("expected a two-element list", line=_line_of(node, key), field=key)
    return data


def format_value(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    return str(x)


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    return path


SPECTRUM_HEADER = ("kappa", "residual", "multiplicity", "bond_index", "re_a", "im_a")
ENTROPY_HEADER = ("kappa", "family", "order_or_s", "value", "normalized_value")
BOUNDS_HEADER = ("kappa", "bound_id", "family", "order_kind", "order", "bound_value", "entropy_value", "margin",
                 "applicable", "pass", "note")
STAR_HEADER = ("kappa", "family", "order", "entropy_A", "entropy_a", "shift_rhs", "gap")


def spectrum_rows(records):
    for rec in records:
        for b, amp in enumerate(rec.a):
            yield (rec.kappa, rec.residual, rec.multiplicity, b, amp.real, amp.imag)


def read_spectrum_csv(path) -> list[dict]:
    """Group a spectrum CSV back into ``{"kappa", "residual", "multiplicity", "a"}`` dicts."""
    out = []
    with Path(path).open() as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != SPECTRUM_HEADER:
            raise ParseError(f"unexpected spectrum columns {reader.fieldnames}", line=1)
        for n, row in enumerate(reader, start=2):
            kappa = float(row["kappa"])
            if int(row["bond_index"]) == 0:
                out.append({"kappa": kappa, "residual": float(row["residual"]),
                            "multiplicity": int(row["multiplicity"]), "a": []})
            elif not out or out[-1]["kappa"] != kappa:
                raise ParseError("bond rows out of order", line=n)
            out[-1]["a"].append(complex(float(row["re_a"]), float(row["im_a"])))
    for item in out:
        item["a"] = np.array(item["a"])
    return out


def bound_rows(reports):
    for rep in reports:
        for r in rep.applicable_rows:
            yield (rep.kappa, r.bound_id, r.family, r.order_kind, r.order, r.bound_value, r.entropy_value,
                   r.margin, r.applicable, r.passed, r.note)
