"""Star graphs through their reduced ``E x E`` problem.

With Neumann ends, an eigenfunction on edge ``e`` is ``A_e cos(k (x - L_e))``
(``x`` measured from the center), and the column ``A`` is a fixed vector of
``exp(i k L) sigma0 exp(i k L)``.  Bond amplitudes follow from ``A`` in
closed form, which makes star graphs the cheapest place to cross-check the
full evolution-matrix machinery.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .entropy import alpha_log, renyi, symmetrized, tsallis, weights_from_amplitudes
from .errors import DimensionMismatch
from .evolution import DEFAULT_TOL, UnitaryFamily, default_grid_step, null_vector, scan_roots
from .graph import MetricGraph, star_metric_graph
from .scattering import VertexConditions, VertexScattering, build_conditions


@dataclass(frozen=True)
class AColumn:
    A: np.ndarray
    kappa: float
    lengths: np.ndarray
    residual: float = 0.0
    multiplicity: int = 1

    @property
    def E(self) -> int:
        return self.A.size

    @property
    def weights(self) -> np.ndarray:
        return weights_from_amplitudes(self.A)

    @property
    def simple(self) -> bool:
        return self.multiplicity <= 1


def _sigma(sigma0) -> np.ndarray:
    return np.asarray(sigma0.matrix if isinstance(sigma0, VertexScattering) else sigma0, dtype=complex)


def star_family(lengths: Sequence[float], sigma0) -> UnitaryFamily:
    L = np.asarray(lengths, dtype=float)
    s = _sigma(sigma0)
    if s.shape != (L.size, L.size):
        raise DimensionMismatch(f"center matrix {s.shape} does not match {L.size} edge lengths")
    return UnitaryFamily(s, L, L)


def star_reduced_unitary(lengths: Sequence[float], sigma0, kappa: float) -> np.ndarray:
    """``exp(i k L) sigma0 exp(i k L)`` with ``L = diag(lengths)``."""
    return star_family(lengths, sigma0).matrix(kappa)


def star_spectrum(lengths: Sequence[float], sigma0, kappa_min: float, kappa_max: float,
                  grid_step: float | None = None, tol: float = DEFAULT_TOL) -> list:
    """Spectral points in the window with their unit edge-amplitude columns."""
    family = star_family(lengths, sigma0)
    L = np.asarray(lengths, dtype=float)
    step = grid_step if grid_step is not None else default_grid_step(float(L.sum()))
    roots, _ = scan_roots(family, kappa_min, kappa_max, step, tol)
    out = []
    for k, _ in roots:
        A, residual, mult = null_vector(family.matrix(k), tol)
        out.append(AColumn(A, float(k), L, residual, mult))
    return out


def lift_amplitudes(col: AColumn) -> np.ndarray:
    """Unit bond vector of the star built by :func:`star_metric_graph`.

    On edge ``j`` the bond leaving the center carries ``A_j exp(-i k L_j) / 2``
    and the bond arriving at it ``A_j / 2``; the result is renormalized.
    """
    A = np.asarray(col.A, dtype=complex)
    a = np.empty(2 * A.size, dtype=complex)
    a[0::2] = 0.5 * A * np.exp(-1j * col.kappa * np.asarray(col.lengths))
    a[1::2] = 0.5 * A
    return a / np.linalg.norm(a)


def star_graph(lengths: Sequence[float], sigma0) -> tuple[MetricGraph, VertexConditions]:
    """The full star graph and conditions matching a reduced problem."""
    L = list(map(float, lengths))
    g = star_metric_graph(len(L), L)
    s = _sigma(sigma0)
    kind = sigma0.kind if isinstance(sigma0, VertexScattering) else "explicit"
    spec = {v: "neumann" for v in range(1, len(L) + 1)}
    spec[0] = VertexScattering(len(L), s, 0, kind)
    return g, build_conditions(g, spec)


def edge_function(col: AColumn, edge: int, x):
    """``A_e cos(k (x - L_e))`` on edge ``edge``, ``x`` from the center."""
    return col.A[edge] * np.cos(col.kappa * (np.asarray(x) - col.lengths[edge]))


def entropy_shift_check(col: AColumn, order: float, family: str = "renyi", symmetrize: bool = False):
    """Both sides of the star entropy-shift identity and their gap.

    Rényi:   ``R(a) = R(A) + ln 2`` (also for symmetrized entropies, with
    ``order`` read as ``s``).  Tsallis: ``H_alpha(a) = 2**(1-alpha) H_alpha(A) + ln_alpha(2)``.
    Returns ``(lhs, rhs, |lhs - rhs|)``.
    """
    w_bond = weights_from_amplitudes(lift_amplitudes(col))
    w_edge = col.weights
    if symmetrize:
        if family != "renyi":
            raise ValueError("the symmetrized shift identity holds for the Rényi family only")
        lhs = symmetrized(w_bond, order, "renyi")
        rhs = symmetrized(w_edge, order, "renyi") + math.log(2)
    elif family == "renyi":
        lhs = renyi(w_bond, order)
        rhs = renyi(w_edge, order) + math.log(2)
    elif family == "tsallis":
        lhs = tsallis(w_bond, order)
        factor = 1.0 if order == 1 else 2.0 ** (1.0 - order)
        rhs = factor * tsallis(w_edge, order) + alpha_log(2.0, order)
    else:
        raise ValueError(f"unknown entropy family {family!r}")
    return lhs, rhs, abs(lhs - rhs)
