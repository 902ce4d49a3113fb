"""Entropic lower bounds for eigenvectors, and a per-eigenfunction auditor.

Every bound is a plain function of a few scalars.  :func:`audit` decides
which of them apply to a given graph and conditions, evaluates the matching
entropies of the eigenvector and records the margins in a
:class:`BoundReport`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .entropy import alpha_log, renyi, symmetrized, tsallis, variance, weights_from_amplitudes
from .errors import NotApplicable, NotAStar, UnsupportedOrder
from .evolution import EigenRecord, _conditions, evolution_matrix, max_entry_modulus
from .graph import Acyclic, MetricGraph, diameter, girth, regular_degree, star_center
from .scattering import VertexScattering, validate_scattering

PASS_TOL = 1e-9
DEFAULT_S_VALUES = (0.0, 0.25, 0.5, 0.75, 1.0)
DEFAULT_ALPHAS = (0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0, math.inf)


def _nu(s: float) -> float:
    return 1.0 / (1.0 - s)


def mu_bound(eta: float, s: float, family: str = "renyi") -> float:
    """Lower bound on a symmetrized entropy from the largest entry modulus ``eta``."""
    if not 0 < eta <= 1 + 1e-12:
        raise ValueError(f"eta must lie in (0, 1], got {eta}")
    eta = min(eta, 1.0)
    if not 0.0 <= s <= 1.0:
        raise UnsupportedOrder(f"s must lie in [0, 1], got {s}")
    if family == "renyi":
        return -math.log(eta)
    if family == "tsallis":
        if s >= 1.0:
            raise UnsupportedOrder("Tsallis bounds need s < 1")
        return 0.5 * alpha_log(eta ** -2, _nu(s))
    raise ValueError(f"unknown entropy family {family!r}")


def power_etas(u: np.ndarray, t_max: int) -> list[float]:
    """``[max|U^t|_ij for t in 1..t_max]``."""
    out = []
    p = np.eye(u.shape[0], dtype=complex)
    for _ in range(t_max):
        p = p @ u
        out.append(max_entry_modulus(p))
    return out


def power_mu_bound(g: MetricGraph, conds, kappa: float, t_max: int, s: float, family: str = "renyi"):
    """Best of the matrix-power bounds for ``t = 1..t_max``; returns ``(t, bound)``."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    etas = power_etas(evolution_matrix(g, conds, kappa).matrix, t_max)
    return _best_power(etas, s, family)


def _best_power(etas: Sequence[float], s: float, family: str):
    t = int(np.argmin(etas)) + 1
    return t, mu_bound(etas[t - 1], s, family)


def default_t_max(g: MetricGraph) -> int:
    gg = girth(g)
    if gg is Acyclic:
        return 2 * diameter(g)
    return int(math.ceil(gg / 2))


def girth_bound(d: int, g: int, s: float, family: str = "renyi") -> float:
    """Bound for ``(d+1)``-regular equi-transmitting graphs of girth ``g``."""
    if g is Acyclic or g is None:
        raise NotApplicable("girth bound needs a graph with a cycle")
    if d < 2:
        raise NotApplicable(f"girth bound needs d >= 2, got {d}")
    if family == "renyi":
        if not 0.0 <= s <= 1.0:
            raise UnsupportedOrder(f"s must lie in [0, 1], got {s}")
        return g / 4.0 * math.log(d)
    if family == "tsallis":
        if not 0.0 <= s < 1.0:
            raise UnsupportedOrder("Tsallis bounds need 0 <= s < 1")
        return 0.5 * alpha_log(float(d) ** (g / 2.0), _nu(s))
    raise ValueError(f"unknown entropy family {family!r}")


def girth_bound_parameters(g: MetricGraph, conds) -> tuple[int, int]:
    """``(d, girth)`` if the girth bound applies to ``g`` with ``conds``; else :class:`NotApplicable`."""
    conds = _conditions(g, conds)
    deg = regular_degree(g)
    if deg is None:
        raise NotApplicable("graph is not regular")
    if deg < 3:
        raise NotApplicable(f"girth bound needs degree d + 1 >= 3, got {deg}")
    if not all(validate_scattering(conds[v]).equi_transmitting for v in range(g.V)):
        raise NotApplicable("not every vertex is equi-transmitting")
    gg = girth(g)
    if gg is Acyclic:
        raise NotApplicable("graph is acyclic")
    return deg - 1, gg


def large_girth_ratio(symmetrized_renyi: float, vertex_count: int) -> float:
    """Empirical ``4 R_s / ln V``, compared against the large-girth constant of a family."""
    return 4.0 * symmetrized_renyi / math.log(vertex_count)


def star_center_bound(sigma0: VertexScattering | np.ndarray, s: float, family: str = "renyi") -> float:
    """Bound on the symmetrized entropies of the edge-amplitude column of a star."""
    m = np.asarray(sigma0.matrix if isinstance(sigma0, VertexScattering) else sigma0)
    if m.shape[0] < 2:
        raise NotAStar("star bounds need a center of degree >= 2")
    return mu_bound(float(np.abs(m).max()), s, family)


def neumann_star_bound(E: int, s: float, family: str = "renyi") -> float:
    """Closed form of :func:`star_center_bound` for a Neumann center, ``E >= 4``."""
    if E < 4:
        raise NotApplicable("the Neumann closed form needs E >= 4")
    return mu_bound(1.0 - 2.0 / E, s, family)


def equi_star_bound(E: int, s: float, family: str = "renyi") -> float:
    """Closed form for an equi-transmitting center: ``ln(E-1)/2`` (Rényi)."""
    if E < 2:
        raise NotApplicable("needs E >= 2")
    if family == "renyi":
        return 0.5 * math.log(E - 1)
    if not 0.0 <= s < 1.0:
        raise UnsupportedOrder("Tsallis bounds need 0 <= s < 1")
    return 0.5 * alpha_log(float(E - 1), _nu(s))


def equi_star_normalized_bond_bound(B: int) -> float:
    """Lower bound on ``R_s(a) / ln B`` for a star with equi-transmitting center."""
    return (math.log(B - 2) + math.log(2)) / (2.0 * math.log(B))


def max_weight_bound(D: float, B: int) -> float:
    """Upper bound on the largest weight of a vector with variance ``D``."""
    return (1.0 + math.sqrt(max(B - 1, 0) * max(D, 0.0))) / B


def variance_renyi_bound(D: float, B: int, alpha: float) -> float:
    """Lower bound on ``R_alpha`` from the variance.

    ``alpha <= 2``: ``ln B - ln(1 + D)``; ``alpha = inf``: the min-entropy
    form; in between the interpolation of the two.
    """
    D = max(D, 0.0)
    if alpha < 0:
        raise UnsupportedOrder(f"Rényi order must be >= 0, got {alpha}")
    collision = math.log(B) - math.log1p(D)
    if alpha <= 2:
        return collision
    tail = math.log(B) - math.log1p(math.sqrt((B - 1) * D))
    if math.isinf(alpha):
        return tail
    return collision / (alpha - 1.0) + (alpha - 2.0) / (alpha - 1.0) * tail


def variance_tsallis_bound(D: float, B: int, alpha: float) -> float:
    """Lower bound on ``H_alpha`` from the variance, ``0 < alpha < inf``."""
    D = max(D, 0.0)
    if not 0 < alpha < math.inf:
        raise UnsupportedOrder(f"Tsallis order must lie in (0, inf), got {alpha}")
    if alpha <= 2:
        return alpha_log(B / (1.0 + D), alpha)
    tail = B ** (1.0 - alpha) * (1.0 + D) * (1.0 + math.sqrt((B - 1) * D)) ** (alpha - 2.0)
    return (1.0 - tail) / (alpha - 1.0)


@dataclass(frozen=True)
class BoundRow:
    bound_id: str
    family: str
    order_kind: str  # "s" or "alpha"
    order: float
    bound_value: float
    entropy_value: float
    margin: float
    applicable: bool
    passed: bool
    note: str = ""


@dataclass
class BoundReport:
    kappa: float
    rows: list = field(default_factory=list)

    @property
    def applicable_rows(self) -> list:
        return [r for r in self.rows if r.applicable]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.applicable_rows)

    def failures(self) -> list:
        return [r for r in self.applicable_rows if not r.passed]

    def min_margin(self) -> float:
        rows = self.applicable_rows
        return min(r.margin for r in rows) if rows else math.inf

    def add(self, bound_id, family, order_kind, order, bound_value, entropy_value, tol, note=""):
        margin = entropy_value - bound_value
        self.rows.append(BoundRow(bound_id, family, order_kind, float(order), float(bound_value),
                                  float(entropy_value), float(margin), True, bool(margin >= -tol), note))

    def skip(self, bound_id, reason):
        nan = math.nan
        self.rows.append(BoundRow(bound_id, "", "", nan, nan, nan, nan, False, True, reason))


@dataclass(frozen=True)
class AuditOptions:
    s_values: tuple = DEFAULT_S_VALUES
    alphas: tuple = DEFAULT_ALPHAS
    t_max: int | None = None
    tol: float = PASS_TOL
    include_degenerate: bool = False


def star_column(g: MetricGraph, conds, a: np.ndarray) -> np.ndarray | None:
    """Edge-amplitude column of a star eigenvector, or ``None`` if ``g`` is not a Neumann-ended star.

    Entry ``j`` is twice the amplitude arriving at the center along edge ``j``.
    """
    c = star_center(g)
    if c is None:
        return None
    conds = _conditions(g, conds)
    for v in range(g.V):
        if v != c and not np.allclose(conds[v].matrix, 1.0, atol=1e-12):
            return None
    return 2.0 * np.asarray(a)[g.incoming(c)]


def _families(s: float):
    return ("renyi", "tsallis") if s < 1.0 else ("renyi",)


def audit(rec: EigenRecord, g: MetricGraph, conds, opts: AuditOptions | None = None) -> BoundReport:
    """Evaluate every applicable bound against the entropies of ``rec``."""
    opts = opts or AuditOptions()
    conds = _conditions(g, conds)
    tol = opts.tol
    report = BoundReport(rec.kappa)
    w = weights_from_amplitudes(rec.a)
    B = w.size
    u = evolution_matrix(g, conds, rec.kappa).matrix
    t_max = opts.t_max or default_t_max(g)
    etas = power_etas(u, t_max)
    sym = {(s, fam): symmetrized(w, s, fam) for s in opts.s_values for fam in _families(s)}

    for (s, fam), value in sym.items():
        report.add("mu", fam, "s", s, mu_bound(etas[0], s, fam), value, tol)
        t, bound = _best_power(etas, s, fam)
        report.add("power_mu", fam, "s", s, bound, value, tol, note=f"t={t}")
        if fam == "renyi" and B > 1:
            report.add("normalized_power_mu", fam, "s", s, bound / math.log(B), value / math.log(B), tol, note=f"t={t}")

    try:
        d, gg = girth_bound_parameters(g, conds)
    except NotApplicable as exc:
        report.skip("girth", str(exc))
    else:
        for (s, fam), value in sym.items():
            report.add("girth", fam, "s", s, girth_bound(d, gg, s, fam), value, tol, note=f"d={d} g={gg}")

    column = star_column(g, conds, rec.a)
    center = star_center(g)
    if column is None or g.E < 2:
        for name in ("star_center", "star_center_bond", "star_equi_normalized"):
            report.skip(name, "not a Neumann-ended star with E >= 2")
    else:
        sigma0 = conds[center]
        varpi = weights_from_amplitudes(column)
        equi = validate_scattering(sigma0).equi_transmitting
        for s in opts.s_values:
            for fam in _families(s):
                col_value = symmetrized(varpi, s, fam)
                bound = star_center_bound(sigma0, s, fam)
                report.add("star_center", fam, "s", s, bound, col_value, tol)
                if fam == "renyi":
                    report.add("star_center_bond", fam, "s", s, bound + math.log(2), sym[(s, fam)], tol)
                    if equi:
                        report.add("star_equi_normalized", fam, "s", s, equi_star_normalized_bond_bound(B),
                                   sym[(s, fam)] / math.log(B), tol)
        if not equi:
            report.skip("star_equi_normalized", "center is not equi-transmitting")

    D = variance(w)
    for alpha in opts.alphas:
        report.add("variance_renyi", "renyi", "alpha", alpha, variance_renyi_bound(D, B, alpha), renyi(w, alpha), tol)
        if 0 < alpha < math.inf:
            report.add("variance_tsallis", "tsallis", "alpha", alpha, variance_tsallis_bound(D, B, alpha),
                       tsallis(w, alpha), tol)
    return report


def audit_records(records, g: MetricGraph, conds, opts: AuditOptions | None = None) -> list:
    opts = opts or AuditOptions()
    return [audit(r, g, conds, opts) for r in records if r.simple or opts.include_degenerate]
