import csv
import math
import textwrap

import numpy as np
import pytest

from qgraph_entropy import bounds, cli
from qgraph_entropy.errors import ParseError, ValidationError
from qgraph_entropy.io import format_value, load_experiment, parse_graph_file, read_spectrum_csv

STAR = """\
edges:
  - [0, 1, 1.0]
  - [0, 2, 1.3]
  - [0, 3, 1.7]
  - [0, 4, 1.1]
conditions:
  default: neumann
  0: equitransmitting
"""

K5 = """\
vertices: 5
edges: [[0,1,1.0],[0,2,1.13],[0,3,1.29],[0,4,1.41],[1,2,1.53],[1,3,1.67],[1,4,1.79],[2,3,1.91],[2,4,2.03],[3,4,2.17]]
conditions: equitransmitting
"""


def _write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(textwrap.dedent(text))
    return p


def _read(path):
    with path.open() as fh:
        return list(csv.DictReader(fh))


def _only(tmp_path, prefix):
    files = sorted(tmp_path.glob(f"{prefix}_*.csv"))
    assert len(files) == 1
    return files[0]


# --- graph files ---------------------------------------------------------

def test_parse_star(tmp_path):
    g, conds = parse_graph_file(_write(tmp_path, "g.yaml", STAR))
    assert (g.V, g.E) == (5, 4)
    assert conds[0].kind == "equitransmitting" and conds[1].kind == "neumann"


def test_parse_explicit_matrix(tmp_path):
    text = """\
    edges: [[0, 1, 1.0], [1, 2, 2.0]]
    conditions:
      default: neumann
      1: [[[0, 0], [0, 1]], [[0, 1], [0, 0]]]
    """
    g, conds = parse_graph_file(_write(tmp_path, "g.yaml", text))
    assert np.allclose(conds[1].matrix, [[0, 1j], [1j, 0]])


@pytest.mark.parametrize("text, invariant", [
    ("edges: [[0, 1, 1.0], [2, 3, 1.0]]\nconditions: neumann\n", "connectivity"),
    ("edges: [[0, 0, 1.0]]\nconditions: neumann\n", "no loops"),
    ("edges: [[0, 1, 1.0], [1, 0, 1.0]]\nconditions: neumann\n", "no multiple edges"),
    ("edges: [[0, 1, -1.0]]\nconditions: neumann\n", "positive length"),
    ("edges: [[0, 1, 1.0]]\n", "missing condition"),
    ("edges: [[0, 1, 1.0], [1, 2, 1.0]]\nconditions: {default: neumann, 1: [[[1, 0], [1, 0]], [[0, 0], [1, 0]]]}\n",
     "unitarity"),
    ("edges: [[0, 1, 1.0], [1, 2, 1.0]]\nconditions: {default: neumann, 1: [[[1, 0]]]}\n", "degree"),
    ("edges: [[0, 1, 1.0], [1, 2, 1.0]]\nconditions: {default: neumann, 1: equitransmitting}\n", "unsupported degree"),
    ("edges: [[0, 1, 1.0]]\nconditions: {default: neumann, 7: neumann}\n", "vertex range"),
])
def test_validation_errors_name_invariant(tmp_path, text, invariant):
    with pytest.raises(ValidationError) as info:
        parse_graph_file(_write(tmp_path, "g.yaml", text))
    assert info.value.invariant == invariant


def test_parse_error_carries_line(tmp_path):
    text = "edges:\n  - [0, 1, 1.0]\n  - [1, 2]\nconditions: neumann\n"
    with pytest.raises(ParseError) as info:
        parse_graph_file(_write(tmp_path, "g.yaml", text))
    assert info.value.line == 3 and info.value.field == "edges[1]"
    with pytest.raises(ParseError):
        parse_graph_file(_write(tmp_path, "bad.yaml", "edges: [[0, 1, 1.0]\n"))
    with pytest.raises(ParseError):
        parse_graph_file(tmp_path / "missing.yaml")


def test_experiment_unknown_field(tmp_path):
    with pytest.raises(ParseError) as info:
        load_experiment(_write(tmp_path, "e.yaml", "family: star\nsizes: 4\n"))
    assert info.value.field == "sizes"


def test_format_value():
    assert format_value(math.inf) == "inf"
    assert format_value(True) == "true"
    assert format_value(0.1) == "0.1"
    assert float(format_value(1 / 3)) == 1 / 3


# --- commands ------------------------------------------------------------

def test_spectrum_roundtrip(tmp_path):
    path = _write(tmp_path, "g.yaml", STAR)
    assert cli.main(["spectrum", str(path), "--kmax", "6", "--out", str(tmp_path)]) == 0
    records = read_spectrum_csv(_only(tmp_path, "spectrum"))
    assert records and all(r["a"].size == 8 for r in records)
    assert all(abs(np.linalg.norm(r["a"]) - 1) < 1e-12 for r in records)
    report = (tmp_path / "report.txt").read_text()
    assert "kmax: 6.0" in report and "kmin: default" in report and "window: [0.1, 6.0]" in report


def test_entropy_command(tmp_path):
    path = _write(tmp_path, "g.yaml", STAR)
    assert cli.main(["entropy", str(path), "--kmax", "5", "--orders", "0.5,2,inf", "--s-values", "0,1",
                     "--out", str(tmp_path)]) == 0
    rows = _read(_only(tmp_path, "entropy"))
    fams = {(r["family"], r["order_or_s"]) for r in rows}
    assert ("renyi", "inf") in fams and ("tsallis", "2.0") in fams and ("tsallis", "inf") not in fams
    assert ("sym_renyi", "1.0") in fams and ("sym_tsallis", "1.0") not in fams
    assert all(0 <= float(r["normalized_value"]) <= 1 + 1e-12 for r in rows)


def test_bounds_command_passes(tmp_path):
    path = _write(tmp_path, "k5.yaml", K5)
    assert cli.main(["bounds", str(path), "--kmax", "4", "--out", str(tmp_path)]) == 0
    rows = _read(_only(tmp_path, "bounds"))
    assert rows and all(r["pass"] == "true" and r["applicable"] == "true" for r in rows)
    assert {"mu", "power_mu", "girth", "variance_renyi"} <= {r["bound_id"] for r in rows}
    assert "skipped star_center" in (tmp_path / "report.txt").read_text()


def test_bounds_command_exit_two_on_failure(tmp_path, monkeypatch):
    path = _write(tmp_path, "k5.yaml", K5)
    monkeypatch.setattr(bounds, "mu_bound", lambda eta, s, family="renyi": 1e6)
    assert cli.main(["bounds", str(path), "--kmax", "3", "--out", str(tmp_path)]) == 2
    assert "FAIL" in (tmp_path / "report.txt").read_text()


def test_star_command(tmp_path):
    path = _write(tmp_path, "g.yaml", STAR)
    assert cli.main(["star", str(path), "--kmax", "6", "--out", str(tmp_path)]) == 0
    rows = _read(_only(tmp_path, "star"))
    assert rows and max(float(r["gap"]) for r in rows) <= 1e-12


def test_star_command_rejects_non_star(tmp_path, capsys):
    path = _write(tmp_path, "k5.yaml", K5)
    assert cli.main(["star", str(path), "--out", str(tmp_path)]) == 1
    assert "star" in capsys.readouterr().err


def test_ensemble_command_reproducible(tmp_path):
    exp = _write(tmp_path, "e.yaml", """\
    family: star
    size: 4
    condition: equitransmitting
    lengths: [1.0, 2.0]
    seed: 5
    kappa_window: [0.1, 8.0]
    n_graphs: 2
    trend_sizes: [4, 6]
    """)
    outs = []
    for d in ("a", "b"):
        assert cli.main(["ensemble", str(exp), "--out", str(tmp_path / d)]) == 0
        outs.append(_only(tmp_path / d, "ensemble").read_text())
        assert _only(tmp_path / d, "trend")
    assert outs[0] == outs[1]
    assert cli.main(["ensemble", str(exp), "--seed", "6", "--out", str(tmp_path / "c")]) == 0
    assert _only(tmp_path / "c", "ensemble").read_text() != outs[0]


@pytest.mark.parametrize("args", [
    ["--kmin", "0"],
    ["--kmin", "3", "--kmax", "2"],
    ["--grid-step", "-1"],
    ["--s-values", "1.5"],
    ["--tmax", "0"],
])
def test_bad_flags_exit_one(tmp_path, args, capsys):
    path = _write(tmp_path, "g.yaml", STAR)
    assert cli.main(["spectrum", str(path), "--out", str(tmp_path)] + args) == 1
    assert "error" in capsys.readouterr().err


def test_invalid_graph_exit_one(tmp_path, capsys):
    path = _write(tmp_path, "g.yaml", "edges: [[0, 0, 1.0]]\nconditions: neumann\n")
    assert cli.main(["spectrum", str(path), "--out", str(tmp_path)]) == 1
    assert "no loops" in capsys.readouterr().err


def test_missing_input_exit_one(tmp_path):
    assert cli.main(["spectrum", str(tmp_path / "nope.yaml"), "--out", str(tmp_path)]) == 1
