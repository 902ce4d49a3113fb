"""Eigenfunction ensembles, averaged entropies and averaged inequalities.

An ensemble is the set of simple-eigenvalue eigenvectors found in a
``kappa`` window of one randomly sampled graph (optionally pooled over
several graphs).  Random numbers come from numpy's PCG64 generator seeded
through :class:`numpy.random.SeedSequence`; graph ``i`` of an ensemble uses
the ``i``-th spawned child stream, so results do not depend on evaluation
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .bounds import DEFAULT_ALPHAS, DEFAULT_S_VALUES, AuditOptions, audit, equi_star_normalized_bond_bound
from .entropy import alpha_log, renyi, symmetrized, tsallis, variance, variance_from_definition
from .errors import BadRange, EmptyEnsemble, QuantumGraphError
from .evolution import DEFAULT_TOL, find_spectrum
from .graph import build_metric_graph, star_metric_graph
from .scattering import build_conditions, star_conditions

RNG_ALGORITHM = "numpy.PCG64+SeedSequence"


def _generator(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, np.random.SeedSequence):
        return np.random.Generator(np.random.PCG64(seed))
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def sample_lengths(E: int, seed, l_min: float = 1.0, l_max: float = 2.0) -> np.ndarray:
    """``E`` independent lengths uniform on ``[l_min, l_max]``."""
    if not 0 < l_min < l_max:
        raise BadRange(f"need 0 < l_min < l_max, got [{l_min}, {l_max}]")
    return _generator(seed).uniform(l_min, l_max, size=E)


@dataclass(frozen=True)
class EnsembleSpec:
    family: str = "star"               # "star" or "regular"
    size: int = 6                      # E for stars, V for regular graphs
    degree: int | None = None          # vertex degree for regular graphs
    condition: str = "equitransmitting"
    length_range: tuple = (1.0, 2.0)
    seed: int = 0
    kappa_window: tuple = (0.1, 30.0)
    alphas: tuple = DEFAULT_ALPHAS
    s_values: tuple = DEFAULT_S_VALUES
    n_graphs: int = 1
    grid_step: float | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        lo, hi = self.length_range
        if not 0 < lo < hi:
            raise BadRange(f"need 0 < l_min < l_max, got {self.length_range}")
        if self.family not in ("star", "regular"):
            raise ValueError(f"unknown ensemble family {self.family!r}")
        if self.family == "regular" and not self.degree:
            raise ValueError("regular ensembles need a vertex degree")


def sample_graph(spec: EnsembleSpec, seed_seq: np.random.SeedSequence):
    """One graph of the ensemble with its conditions."""
    rng = _generator(seed_seq)
    lo, hi = spec.length_range
    if spec.family == "star":
        g = star_metric_graph(spec.size, sample_lengths(spec.size, rng, lo, hi))
        return g, star_conditions(g, spec.condition)
    for _ in range(100):
        h = nx.random_regular_graph(spec.degree, spec.size, seed=int(rng.integers(2 ** 32)))
        if nx.is_connected(h):
            break
    else:
        raise QuantumGraphError(f"could not sample a connected {spec.degree}-regular graph on {spec.size} vertices")
    pairs = sorted(tuple(sorted(e)) for e in h.edges())
    lengths = sample_lengths(len(pairs), rng, lo, hi)
    g = build_metric_graph([(i, j, L) for (i, j), L in zip(pairs, lengths)], vertex_count=spec.size)
    return g, build_conditions(g, spec.condition)


@dataclass
class EnsembleSummary:
    B: int | None
    count: int
    alphas: tuple
    s_values: tuple
    mean_renyi: dict = field(default_factory=dict)
    mean_tsallis: dict = field(default_factory=dict)
    mean_sym_renyi: dict = field(default_factory=dict)
    mean_sym_tsallis: dict = field(default_factory=dict)
    mean_variance: float = math.nan
    mean_variance_alt: float = math.nan
    audit_pass_rate: float = math.nan
    n_degenerate: int = 0
    n_graphs: int = 0
    partial: bool = False
    errors: list = field(default_factory=list)
    records: list = field(default_factory=list)
    rng_algorithm: str = RNG_ALGORITHM

    def normalized_renyi(self) -> dict:
        return {a: v / math.log(self.B) for a, v in self.mean_renyi.items()}

    def normalized_tsallis(self) -> dict:
        return {a: v / alpha_log(float(self.B), a) for a, v in self.mean_tsallis.items()}


def _record_row(w: np.ndarray, alphas, s_values) -> dict:
    row = {
        "B": w.size,
        "variance": variance(w),
        "variance_def": variance_from_definition(w),
        "sum_w2": float(np.dot(w, w)),
        "renyi": {a: renyi(w, a) for a in alphas},
        "tsallis": {a: tsallis(w, a) for a in alphas if 0 < a < math.inf},
        "sym_renyi": {s: symmetrized(w, s, "renyi") for s in s_values},
        "sym_tsallis": {s: symmetrized(w, s, "tsallis") for s in s_values if s < 1},
    }
    return row


def summarize(rows: Sequence[dict], alphas, s_values) -> EnsembleSummary:
    """Arithmetic means over per-vector rows (as built by :func:`weight_rows`)."""
    Bs = {r["B"] for r in rows}
    summary = EnsembleSummary(B=Bs.pop() if len(Bs) == 1 else None, count=len(rows),
                              alphas=tuple(alphas), s_values=tuple(s_values), records=list(rows))
    if not rows:
        return summary
    n = len(rows)
    summary.mean_variance = math.fsum(r["variance"] for r in rows) / n
    if summary.B is not None:
        summary.mean_variance_alt = -1.0 + summary.B * math.fsum(r["sum_w2"] for r in rows) / n
    for key, target in (("renyi", summary.mean_renyi), ("tsallis", summary.mean_tsallis),
                        ("sym_renyi", summary.mean_sym_renyi), ("sym_tsallis", summary.mean_sym_tsallis)):
        for order in rows[0][key]:
            target[order] = math.fsum(r[key][order] for r in rows) / n
    audited = [r["audit_passed"] for r in rows if "audit_passed" in r]
    if audited:
        summary.audit_pass_rate = sum(audited) / len(audited)
    return summary


def weight_rows(weight_vectors: Iterable[np.ndarray], alphas=DEFAULT_ALPHAS, s_values=DEFAULT_S_VALUES) -> list:
    return [_record_row(np.asarray(w, dtype=float), alphas, s_values) for w in weight_vectors]


def synthetic_summary(weight_vectors, alphas=DEFAULT_ALPHAS, s_values=DEFAULT_S_VALUES) -> EnsembleSummary:
    return summarize(weight_rows(weight_vectors, alphas, s_values), alphas, s_values)


def collect_ensemble(spec: EnsembleSpec, audit_records: bool = True) -> EnsembleSummary:
    """Scan every sampled graph, keep simple eigenvalues, aggregate entropies and audits."""
    rows = []
    errors = []
    n_degenerate = 0
    opts = AuditOptions(s_values=spec.s_values, alphas=spec.alphas)
    for i, child in enumerate(np.random.SeedSequence(spec.seed).spawn(spec.n_graphs)):
        try:
            g, conds = sample_graph(spec, child)
            scan = find_spectrum(g, conds, *spec.kappa_window, grid_step=spec.grid_step, tol=spec.tol)
        except QuantumGraphError as exc:
            errors.append(f"graph {i}: {exc}")
            continue
        for rec in scan.records:
            if not rec.simple:
                n_degenerate += 1
                continue
            row = _record_row(rec.weights, spec.alphas, spec.s_values)
            row["graph"] = i
            row["kappa"] = rec.kappa
            if audit_records:
                row["audit_passed"] = audit(rec, g, conds, opts).passed
            rows.append(row)
    summary = summarize(rows, spec.alphas, spec.s_values)
    summary.n_degenerate = n_degenerate
    summary.n_graphs = spec.n_graphs
    summary.errors = errors
    summary.partial = bool(errors)
    return summary


def averaged_bound_check(summary: EnsembleSummary, B: int | None = None, alpha: float = 1.0) -> dict:
    """Margins (mean entropy minus bound) of the averaged variance inequalities at order ``alpha``.

    Keys present depend on ``alpha``:

    * ``renyi_low``  (``alpha <= 2``): normalized mean Rényi vs ``1 - ln(1+<D>)/ln B``;
    * ``renyi_high`` (``alpha >= 2``): the interpolated form with the max-weight term;
    * ``tsallis`` and ``tsallis_normalized`` (``0 < alpha <= 2``);
    * ``tsallis2_gap`` at ``alpha = 2``: absolute deviation from the exact linear-entropy relation.
    """
    if summary.count == 0:
        raise EmptyEnsemble("no eigenvectors in ensemble")
    B = B or summary.B
    if B is None:
        raise ValueError("ensemble mixes vector lengths; pass B explicitly")
    D = summary.mean_variance
    lnB = math.log(B)
    out = {}
    if alpha in summary.mean_renyi:
        r = summary.mean_renyi[alpha] / lnB
        if alpha <= 2:
            out["renyi_low"] = r - (1.0 - math.log1p(D) / lnB)
        if alpha >= 2:
            tail = math.log1p(math.sqrt((B - 1) * D))
            if math.isinf(alpha):
                bound = 1.0 - tail / lnB
            else:
                bound = 1.0 - math.log1p(D) / ((alpha - 1.0) * lnB) - (alpha - 2.0) / ((alpha - 1.0) * lnB) * tail
            out["renyi_high"] = r - bound
    if alpha in summary.mean_tsallis and 0 < alpha <= 2:
        h = summary.mean_tsallis[alpha]
        out["tsallis"] = h - alpha_log(B / (1.0 + D), alpha)
        normalized = 1.0 - alpha_log(1.0 / (1.0 + D), alpha) / alpha_log(1.0 / B, alpha)
        out["tsallis_normalized"] = h / alpha_log(float(B), alpha) - normalized
        if alpha == 2:
            out["tsallis2_gap"] = abs(h - (1.0 - (1.0 + D) / B))
    return out


def porter_thomas_vectors(n: int, B: int, seed, real: bool = False) -> np.ndarray:
    """``n`` weight vectors ``|z|^2 / ||z||^2`` with Gaussian ``z`` (complex by default)."""
    rng = _generator(seed)
    z = rng.standard_normal((n, B))
    if not real:
        z = z + 1j * rng.standard_normal((n, B))
    w = np.abs(z) ** 2
    return w / w.sum(axis=1, keepdims=True)


def fixed_variance_vectors(n: int, B: int, D: float, seed) -> np.ndarray:
    """``n`` weight vectors with variance exactly ``D``.

    Each is ``u + lam (p - u)`` with ``u`` uniform and ``p`` a real
    Porter-Thomas vector; the variance is quadratic in the deviation from
    ``u``, so ``lam = sqrt(D / D(p))`` hits ``D`` (``p`` is redrawn while
    ``D(p) < D``).
    """
    if not 0 <= D <= B - 1:
        raise BadRange(f"variance must lie in [0, {B - 1}], got {D}")
    rng = _generator(seed)
    u = np.full(B, 1.0 / B)
    out = np.empty((n, B))
    for i in range(n):
        while True:
            p = porter_thomas_vectors(1, B, rng, real=True)[0]
            dp = variance(p)
            if dp >= D and dp > 0:
                break
        w = u + math.sqrt(D / dp) * (p - u)
        out[i] = w / w.sum()
    return out


def fit_log_rate(Bs: Sequence[int], deficits: Sequence[float]):
    """Least-squares ``c`` in ``deficit = c / ln B``; returns ``(c, relative_residual)``."""
    x = 1.0 / np.log(np.asarray(Bs, dtype=float))
    y = np.asarray(deficits, dtype=float)
    c = float(x @ y / (x @ x))
    return c, float(np.linalg.norm(y - c * x) / np.linalg.norm(y))


def fit_affine_log_rate(Bs: Sequence[int], values: Sequence[float]):
    """Least-squares ``(a, b)`` in ``value = a + b / ln B`` with relative residual."""
    x = 1.0 / np.log(np.asarray(Bs, dtype=float))
    y = np.asarray(values, dtype=float)
    A = np.column_stack([np.ones_like(x), x])
    (a, b), *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(a), float(b), float(np.linalg.norm(y - A @ [a, b]) / np.linalg.norm(y))


def asymptotic_scan(family: str, sizes: Sequence[int], spec: EnsembleSpec | None = None,
                    n_vectors: int = 2000, variance_target: float = 1.0) -> list:
    """Trend table of normalized mean entropies against the number of bonds.

    ``family="synthetic"`` uses :func:`fixed_variance_vectors` of length
    ``B`` for each entry of ``sizes``; ``family="star"`` samples star
    ensembles with ``E`` taken from ``sizes`` and the rest from ``spec``.
    """
    if list(sizes) != sorted(sizes) or len(set(sizes)) != len(sizes):
        raise ValueError("sizes must be strictly increasing")
    spec = spec or EnsembleSpec()
    table = []
    for n, size in enumerate(sizes):
        if family == "synthetic":
            seq = np.random.SeedSequence([spec.seed, n])
            summary = synthetic_summary(fixed_variance_vectors(n_vectors, size, variance_target, seq),
                                        spec.alphas, ())
        elif family == "star":
            sub = replace(spec, family="star", size=size)
            summary = collect_ensemble(sub, audit_records=False)
        else:
            raise ValueError(f"unknown trend family {family!r}")
        B = summary.B if summary.count else (2 * size if family == "star" else size)
        row = {"B": B, "count": summary.count, "mean_variance": summary.mean_variance}
        if summary.count:
            row.update({f"renyi_norm[{a}]": v for a, v in summary.normalized_renyi().items()})
            row.update({f"tsallis_norm[{a}]": v for a, v in summary.normalized_tsallis().items()})
            row["variance_bound_norm"] = 1.0 - math.log1p(summary.mean_variance) / math.log(B)
        if B > 2:
            row["star_equi_bound_norm"] = equi_star_normalized_bond_bound(B)
        table.append(row)
    return table
