"""Command-line front end.

::

    qgraph-entropy spectrum graph.yaml --kmin 0.1 --kmax 10 --out results/
    qgraph-entropy entropy  graph.yaml --orders 0.5,1,2,inf --s-values 0,0.5,1
    qgraph-entropy bounds   graph.yaml --tmax 3
    qgraph-entropy star     star.yaml
    qgraph-entropy ensemble experiment.yaml --seed 7

Each run writes ``<command>_<UTC timestamp>.csv`` and ``report.txt`` into
``--out``.  Exit status: 0 on success, 2 if an audited bound or identity
fails beyond tolerance, 1 on any error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__, kernels
from .bounds import DEFAULT_ALPHAS, DEFAULT_S_VALUES, PASS_TOL, AuditOptions, audit_records
from .ensemble import RNG_ALGORITHM, EnsembleSpec, asymptotic_scan, averaged_bound_check, collect_ensemble
from .entropy import alpha_log, conjugate_orders, entropy, max_value, symmetrized
from .errors import QuantumGraphError
from .evolution import DEFAULT_TOL, default_grid_step, find_spectrum
from .graph import star_center
from .io import (BOUNDS_HEADER, ENTROPY_HEADER, SPECTRUM_HEADER, STAR_HEADER, bound_rows, format_value,
                 load_experiment, parse_graph_file, spectrum_rows, write_csv)
from .star import entropy_shift_check, star_spectrum

log = logging.getLogger("qgraph_entropy")

COMMANDS = ("spectrum", "entropy", "bounds", "star", "ensemble")
DEFAULT_KMIN = 0.1
DEFAULT_ROOTS = 40
SHIFT_TOL = 1e-12


@dataclass
class RunConfig:
    command: str
    input: Path
    kmin: float | None = None
    kmax: float | None = None
    grid_step: float | None = None
    tol: float = DEFAULT_TOL
    orders: tuple = DEFAULT_ALPHAS
    s_values: tuple = DEFAULT_S_VALUES
    tmax: int | None = None
    seed: int | None = None
    out: Path = Path(".")
    include_degenerate: bool = False
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%S"))

    def validate(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.kmin is not None and not self.kmin > 0:
            raise ValueError(f"--kmin must be positive, got {self.kmin}")
        if self.kmin is not None and self.kmax is not None and not self.kmax > self.kmin:
            raise ValueError(f"--kmax must exceed --kmin, got {self.kmax} <= {self.kmin}")
        if self.grid_step is not None and not self.grid_step > 0:
            raise ValueError(f"--grid-step must be positive, got {self.grid_step}")
        if not self.tol > 0:
            raise ValueError(f"--tol must be positive, got {self.tol}")
        if any(not a >= 0 for a in self.orders):
            raise ValueError(f"--orders must be >= 0 (inf allowed), got {self.orders}")
        if any(not 0 <= s <= 1 for s in self.s_values):
            raise ValueError(f"--s-values must lie in [0, 1], got {self.s_values}")
        if self.tmax is not None and self.tmax < 1:
            raise ValueError(f"--tmax must be >= 1, got {self.tmax}")


def _float_list(text: str) -> tuple:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qgraph-entropy",
                                     description="Quantum-graph spectra, eigenvector entropies and entropic bounds.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", type=Path, help="experiment file" if name == "ensemble" else "graph description file")
        p.add_argument("--kmin", type=float, default=None, help=f"window start (default {DEFAULT_KMIN})")
        p.add_argument("--kmax", type=float, default=None,
                       help=f"window end (default: kmin + {DEFAULT_ROOTS} mean level spacings)")
        p.add_argument("--grid-step", type=float, default=None, help="scan step (default pi / (8 * total length))")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="secular-gap acceptance tolerance")
        p.add_argument("--orders", type=_float_list, default=DEFAULT_ALPHAS, help="entropy orders, e.g. 0.5,1,2,inf")
        p.add_argument("--s-values", type=_float_list, default=DEFAULT_S_VALUES, help="symmetrization parameters in [0, 1]")
        p.add_argument("--tmax", type=int, default=None, help="largest matrix power for the power bound")
        p.add_argument("--seed", type=int, default=None, help="RNG seed (ensemble)")
        p.add_argument("--out", type=Path, default=Path("."), help="output directory")
        p.add_argument("--include-degenerate", action="store_true", help="audit degenerate eigenvalues as well")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def _window(cfg: RunConfig, total_length: float) -> tuple[float, float]:
    kmin = cfg.kmin if cfg.kmin is not None else DEFAULT_KMIN
    kmax = cfg.kmax if cfg.kmax is not None else kmin + DEFAULT_ROOTS * math.pi / total_length
    return kmin, kmax


class _Report:
    def __init__(self, cfg: RunConfig):
        self.lines = [f"qgraph-entropy {__version__} ({kernels.BACKEND} kernels)", f"command: {cfg.command}"]
        for k, v in asdict(cfg).items():
            if k not in ("command", "timestamp"):
                self.lines.append(f"  {k}: {_fmt(v)}")

    def add(self, text: str):
        self.lines.append(text)

    def write(self, out: Path):
        (out / "report.txt").write_text("\n".join(self.lines) + "\n")


def _fmt(v):
    if isinstance(v, tuple):
        return ",".join(format_value(x) for x in v)
    if v is None:
        return "default"
    return format_value(v)


def _scan(cfg, g, conds, report):
    kmin, kmax = _window(cfg, g.total_length)
    step = cfg.grid_step or default_grid_step(g.total_length)
    report.add(f"graph: V={g.V} E={g.E} B={g.B} total_length={g.total_length!r}")
    report.add(f"window: [{kmin!r}, {kmax!r}] grid_step={step!r}")
    scan = find_spectrum(g, conds, kmin, kmax, grid_step=step, tol=cfg.tol)
    n_simple = len(scan.simple_records())
    report.add(f"roots: {len(scan.records)} (simple {n_simple}, degenerate {len(scan.records) - n_simple})")
    weyl = g.total_length * (kmax - kmin) / math.pi
    report.add(f"weyl estimate: {weyl:.2f}")
    if abs(len(scan.records) - weyl) > g.V + 2:
        report.add("WARNING: root count deviates from the Weyl estimate by more than V + 2; roots may be missing")
    for msg in scan.warnings:
        report.add(f"WARNING: {msg}")
    return scan


def _csv_path(cfg: RunConfig, name: str | None = None) -> Path:
    return cfg.out / f"{name or cfg.command}_{cfg.timestamp}.csv"


def _cmd_spectrum(cfg, report):
    g, conds = parse_graph_file(cfg.input)
    scan = _scan(cfg, g, conds, report)
    path = write_csv(_csv_path(cfg), SPECTRUM_HEADER, spectrum_rows(scan.records))
    if scan.records:
        report.add(f"max residual: {max(r.residual for r in scan.records):.3e}")
    report.add(f"wrote {path.name}")
    return 0


def _entropy_rows(records, orders, s_values, include_degenerate):
    for rec in records:
        if not (rec.simple or include_degenerate):
            continue
        w = rec.weights
        B = w.size
        for fam in ("renyi", "tsallis"):
            for a in orders:
                if fam == "tsallis" and not 0 < a < math.inf:
                    continue
                v = entropy(w, a, fam)
                yield (rec.kappa, fam, a, v, v / max_value(B, a, fam) if B > 1 else 0.0)
        for s in s_values:
            v = symmetrized(w, s, "renyi")
            yield (rec.kappa, "sym_renyi", s, v, v / math.log(B) if B > 1 else 0.0)
            if s < 1:
                a, b = conjugate_orders(s)
                v = symmetrized(w, s, "tsallis")
                top = 0.5 * (alpha_log(float(B), a) + alpha_log(float(B), b))
                yield (rec.kappa, "sym_tsallis", s, v, v / top if B > 1 else 0.0)


def _cmd_entropy(cfg, report):
    g, conds = parse_graph_file(cfg.input)
    scan = _scan(cfg, g, conds, report)
    rows = list(_entropy_rows(scan.records, cfg.orders, cfg.s_values, cfg.include_degenerate))
    path = write_csv(_csv_path(cfg), ENTROPY_HEADER, rows)
    shannon = [r[3] for r in rows if r[1] == "renyi" and r[2] == 1.0]
    if shannon:
        report.add(f"mean Shannon entropy: {np.mean(shannon)!r} (ln B = {math.log(g.B)!r})")
    report.add(f"wrote {path.name}")
    return 0


def _cmd_bounds(cfg, report):
    g, conds = parse_graph_file(cfg.input)
    scan = _scan(cfg, g, conds, report)
    opts = AuditOptions(s_values=cfg.s_values, alphas=cfg.orders, t_max=cfg.tmax,
                        include_degenerate=cfg.include_degenerate)
    reports = audit_records(scan.records, g, conds, opts)
    path = write_csv(_csv_path(cfg), BOUNDS_HEADER, bound_rows(reports))
    failures = [(rep.kappa, r) for rep in reports for r in rep.failures()]
    report.add(f"audited eigenfunctions: {len(reports)}")
    if reports:
        report.add(f"smallest margin: {min(rep.min_margin() for rep in reports)!r}")
        skipped = {r.bound_id: r.note for r in reports[0].rows if not r.applicable}
        for bid, why in sorted(skipped.items()):
            report.add(f"skipped {bid}: {why}")
    report.add(f"failed rows (margin < -{PASS_TOL:g}): {len(failures)}")
    for kappa, r in failures[:20]:
        report.add(f"  FAIL kappa={kappa!r} {r.bound_id} {r.family} {r.order_kind}={r.order} margin={r.margin!r}")
    report.add(f"wrote {path.name}")
    return 2 if failures else 0


def _cmd_star(cfg, report):
    g, conds = parse_graph_file(cfg.input)
    c = star_center(g)
    if c is None or any(v != c and not np.allclose(conds[v].matrix, 1.0) for v in range(g.V)):
        raise QuantumGraphError("star command needs a star graph with Neumann pendant vertices")
    lengths = [g.bond_length[b] for b in g.outgoing(c)]
    kmin, kmax = _window(cfg, g.total_length)
    step = cfg.grid_step or default_grid_step(g.total_length)
    report.add(f"star: center={c} E={g.E} window=[{kmin!r}, {kmax!r}]")
    cols = star_spectrum(lengths, conds[c], kmin, kmax, grid_step=step, tol=cfg.tol)
    rows = []
    for col in cols:
        if not (col.simple or cfg.include_degenerate):
            continue
        for a in cfg.orders:
            lhs, rhs, gap = entropy_shift_check(col, a, "renyi")
            rows.append((col.kappa, "renyi", a, entropy(col.weights, a, "renyi"), lhs, rhs, gap))
            if 0 < a < math.inf:
                lhs, rhs, gap = entropy_shift_check(col, a, "tsallis")
                rows.append((col.kappa, "tsallis", a, entropy(col.weights, a, "tsallis"), lhs, rhs, gap))
        for s in cfg.s_values:
            lhs, rhs, gap = entropy_shift_check(col, s, "renyi", symmetrize=True)
            rows.append((col.kappa, "sym_renyi", s, symmetrized(col.weights, s), lhs, rhs, gap))
    path = write_csv(_csv_path(cfg), STAR_HEADER, rows)
    worst = max((r[6] for r in rows), default=0.0)
    report.add(f"roots: {len(cols)}; largest shift-identity gap: {worst!r}")
    report.add(f"wrote {path.name}")
    return 2 if worst > SHIFT_TOL else 0


def _cmd_ensemble(cfg, report):
    data = load_experiment(cfg.input)
    kw = {}
    for key in ("family", "size", "degree", "condition", "n_graphs", "grid_step"):
        if key in data:
            kw[key] = data[key]
    if "lengths" in data:
        kw["length_range"] = tuple(float(x) for x in data["lengths"])
    if "kappa_window" in data:
        kw["kappa_window"] = tuple(float(x) for x in data["kappa_window"])
    kw["seed"] = cfg.seed if cfg.seed is not None else int(data.get("seed", 0))
    kw["alphas"] = tuple(float(a) for a in data.get("alphas", cfg.orders))
    kw["s_values"] = tuple(float(s) for s in data.get("s_values", cfg.s_values))
    kw["tol"] = float(data.get("tol", cfg.tol))
    window = list(kw.get("kappa_window", EnsembleSpec.kappa_window))
    if cfg.kmin is not None:
        window[0] = cfg.kmin
    if cfg.kmax is not None:
        window[1] = cfg.kmax
    kw["kappa_window"] = tuple(window)
    if cfg.grid_step is not None:
        kw["grid_step"] = cfg.grid_step
    spec = EnsembleSpec(**kw)
    report.add(f"ensemble spec: {spec}")
    report.add(f"rng: {RNG_ALGORITHM}")
    summary = collect_ensemble(spec)
    rows = [("count", "", "", summary.count), ("degenerate_skipped", "", "", summary.n_degenerate)]
    failed = False
    if summary.count:
        rows += [("mean_variance", "", "", summary.mean_variance),
                 ("mean_variance_alt", "", "", summary.mean_variance_alt),
                 ("audit_pass_rate", "", "", summary.audit_pass_rate)]
        norm_r, norm_h = summary.normalized_renyi(), summary.normalized_tsallis()
        for a, v in summary.mean_renyi.items():
            rows += [("mean", "renyi", a, v), ("mean_normalized", "renyi", a, norm_r[a])]
        for a, v in summary.mean_tsallis.items():
            rows += [("mean", "tsallis", a, v), ("mean_normalized", "tsallis", a, norm_h[a])]
        for s, v in summary.mean_sym_renyi.items():
            rows.append(("mean", "sym_renyi", s, v))
        for s, v in summary.mean_sym_tsallis.items():
            rows.append(("mean", "sym_tsallis", s, v))
        for a in spec.alphas:
            for name, margin in averaged_bound_check(summary, alpha=a).items():
                rows.append((f"averaged_{name}", "", a, margin))
                if name == "tsallis2_gap":
                    failed |= margin > 1e-12
                elif margin < -PASS_TOL:
                    failed = True
        failed |= summary.audit_pass_rate < 1.0
    path = write_csv(_csv_path(cfg), ("statistic", "family", "order", "value"), rows)
    report.add(f"eigenfunctions: {summary.count} (degenerate skipped: {summary.n_degenerate})")
    for err in summary.errors:
        report.add(f"ERROR: {err}")
    if summary.count:
        report.add(f"mean variance: {summary.mean_variance!r}; audit pass rate: {summary.audit_pass_rate!r}")
    report.add(f"wrote {path.name}")
    sizes = data.get("trend_sizes")
    if sizes:
        table = asymptotic_scan(spec.family, [int(x) for x in sizes], spec)
        keys = sorted({k for row in table for k in row}, key=lambda k: (k != "B", k))
        tpath = write_csv(_csv_path(cfg, "trend"), keys, ([row.get(k, "") for k in keys] for row in table))
        report.add(f"wrote {tpath.name}")
    return 2 if failed or summary.partial else 0


_DISPATCH = {"spectrum": _cmd_spectrum, "entropy": _cmd_entropy, "bounds": _cmd_bounds,
             "star": _cmd_star, "ensemble": _cmd_ensemble}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        if not cfg.input.is_file():
            raise FileNotFoundError(f"input file not found: {cfg.input}")
        cfg.out.mkdir(parents=True, exist_ok=True)
        report = _Report(cfg)
        status = _DISPATCH[cfg.command](cfg, report)
        report.add(f"exit status: {status}")
        report.write(cfg.out)
        return status
    except (QuantumGraphError, ValueError, OSError) as exc:
        print(f"qgraph-entropy: error: {exc}", file=sys.stderr)
        return 1


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    cfg = RunConfig(command=args.command, input=args.input, kmin=args.kmin, kmax=args.kmax,
                    grid_step=args.grid_step, tol=args.tol, orders=args.orders, s_values=args.s_values,
                    tmax=args.tmax, seed=args.seed, out=args.out, include_degenerate=args.include_degenerate)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
