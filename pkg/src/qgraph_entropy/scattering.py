"""Vertex scattering matrices.

Rows of a vertex matrix are indexed by the bonds leaving the vertex and
columns by the bonds entering it, both in edge-index order (see
:meth:`MetricGraph.outgoing` / :meth:`MetricGraph.incoming`).  Row ``k`` and
column ``k`` therefore belong to the same edge, and the diagonal is
back-scattering.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Union

import numpy as np

from .errors import DegreeMismatch, MissingCondition, NotPrime, UnsupportedDegree, ValidationError
from .graph import MetricGraph, star_center

UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class VertexScattering:
    degree: int
    matrix: np.ndarray
    vertex: int | None = None
    kind: str = "explicit"

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (self.degree, self.degree):
            raise DegreeMismatch(f"matrix shape {m.shape} does not match degree {self.degree}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def at(self, vertex: int) -> "VertexScattering":
        return VertexScattering(self.degree, self.matrix, vertex, self.kind)


@dataclass(frozen=True)
class ScatteringReport:
    unitarity_residual: float
    max_modulus: float
    zero_diagonal: bool
    equi_transmitting: bool
    unitary: bool


def neumann_matrix(d: int, vertex: int | None = None) -> VertexScattering:
    """Kirchhoff matrix ``2/d - delta``."""
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    m = np.full((d, d), 2.0 / d) - np.eye(d)
    return VertexScattering(d, m, vertex, "neumann")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def legendre_symbol(a: int, p: int) -> int:
    if p == 2 or not _is_prime(p):
        raise NotPrime(f"{p} is not an odd prime")
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def paley_conference_matrix(p: int) -> np.ndarray:
    """Order ``p + 1`` Paley conference matrix ``C`` with ``C C^T = p I``.

    Skew-symmetric for ``p = 3 mod 4``, symmetric for ``p = 1 mod 4``.
    Index 0 plays the role of the point at infinity.
    """
    chi = np.array([legendre_symbol(x, p) for x in range(p)], dtype=float)
    idx = np.arange(p)
    q = chi[(idx[None, :] - idx[:, None]) % p]
    c = np.zeros((p + 1, p + 1))
    c[0, 1:] = 1.0
    c[1:, 0] = 1.0 if p % 4 == 1 else -1.0
    c[1:, 1:] = q
    return c


def equi_transmitting_matrix(d: int, vertex: int | None = None) -> VertexScattering:
    """Zero-diagonal unitary with every off-diagonal modulus ``1/sqrt(d - 1)``.

    Only degrees with ``d - 1`` an odd prime are constructed.
    """
    p = d - 1
    if d < 3 or p == 2 or not _is_prime(p):
        raise UnsupportedDegree(f"no equi-transmitting construction for degree {d} (d - 1 = {p} is not an odd prime)")
    return VertexScattering(d, paley_conference_matrix(p) / np.sqrt(p), vertex, "equitransmitting")


def validate_scattering(m: VertexScattering | np.ndarray, tol: float = UNITARY_TOL) -> ScatteringReport:
    mat = np.asarray(m.matrix if isinstance(m, VertexScattering) else m, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DegreeMismatch(f"scattering matrix must be square, got shape {mat.shape}")
    d = mat.shape[0]
    residual = float(np.max(np.abs(mat.conj().T @ mat - np.eye(d))))
    mod = np.abs(mat)
    zero_diag = bool(np.all(np.diag(mod) <= tol))
    if d >= 2:
        off = mod[~np.eye(d, dtype=bool)]
        equi = zero_diag and bool(np.all(np.abs(off - 1.0 / np.sqrt(d - 1)) <= tol))
    else:
        equi = False
    return ScatteringReport(residual, float(mod.max()), zero_diag, equi, residual <= tol)


ConditionSpec = Union[str, VertexScattering, np.ndarray]


class VertexConditions(Mapping[int, VertexScattering]):
    """One validated scattering matrix per vertex of a particular graph."""

    def __init__(self, g: MetricGraph, matrices: Mapping[int, VertexScattering], tol: float = UNITARY_TOL):
        deg = g.degrees()
        table = {}
        for v in range(g.vertex_count):
            if v not in matrices:
                raise MissingCondition(f"no scattering matrix for vertex {v}")
            m = matrices[v]
            if m.degree != deg[v]:
                raise DegreeMismatch(f"vertex {v} has degree {deg[v]} but its matrix is {m.degree}x{m.degree}")
            report = validate_scattering(m, tol)
            if not report.unitary:
                raise ValidationError("unitarity", f"vertex {v} residual {report.unitarity_residual:.3e}")
            table[v] = m.at(v)
        extra = set(matrices) - set(table)
        if extra:
            raise ValidationError("vertex range", f"conditions given for unknown vertices {sorted(extra)}")
        self.graph = g
        self._table = table

    def __getitem__(self, v: int) -> VertexScattering:
        return self._table[v]

    def __iter__(self):
        return iter(self._table)

    def __len__(self):
        return len(self._table)

    def kinds(self) -> set[str]:
        return {m.kind for m in self._table.values()}

    def max_modulus(self) -> float:
        return max(float(np.abs(m.matrix).max()) for m in self._table.values())


def make_scattering(kind: ConditionSpec, d: int, vertex: int | None = None) -> VertexScattering:
    if isinstance(kind, VertexScattering):
        return kind.at(vertex) if vertex is not None else kind
    if isinstance(kind, str):
        name = kind.lower().replace("-", "").replace("_", "")
        if name in ("neumann", "kirchhoff", "standard"):
            return neumann_matrix(d, vertex)
        if name in ("equitransmitting", "equi"):
            return equi_transmitting_matrix(d, vertex)
        raise ValueError(f"unknown condition type {kind!r}")
    return VertexScattering(d, np.asarray(kind, dtype=complex), vertex)


def build_conditions(g: MetricGraph, spec: Mapping[int, ConditionSpec] | ConditionSpec) -> VertexConditions:
    """Conditions from a per-vertex spec, or one spec applied to every vertex."""
    deg = g.degrees()
    if isinstance(spec, Mapping):
        mats = {int(v): make_scattering(k, int(deg[int(v)]) if 0 <= int(v) < g.V else 0, int(v))
                for v, k in spec.items() if 0 <= int(v) < g.V}
        extra = [v for v in spec if not 0 <= int(v) < g.V]
        if extra:
            raise ValidationError("vertex range", f"conditions given for unknown vertices {extra}")
    else:
        mats = {v: make_scattering(spec, int(deg[v]), v) for v in range(g.V)}
    return VertexConditions(g, mats)


def star_conditions(g: MetricGraph, center: ConditionSpec = "neumann") -> VertexConditions:
    """Given condition at the star center, Neumann (``[1]``) at every pendant end."""
    c = star_center(g)
    if c is None:
        raise ValueError("graph is not a star")
    spec = {v: "neumann" for v in range(g.V)}
    spec[c] = center
    return build_conditions(g, spec)
