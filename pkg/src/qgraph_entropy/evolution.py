"""Bond evolution matrix, secular-equation scan and eigenvectors.

For a graph with conditions ``sigma`` the ``B x B`` evolution matrix is

    U[b, b'] = sigma^(v)[out(b), in(b')] * exp(i k L_b')    if terminus(b') == origin(b) == v

and eigenfunctions with eigenvalue ``k**2`` correspond to ``U(k) a = a``.
Spectral points are zeros of the smallest singular value of ``I - U(k)``.
They are counted exactly per grid interval from eigenphase sums, isolated
by bisection and located by a bracketed solve; a point is accepted when the
singular value there is below tolerance.  The scan works on any
:class:`UnitaryFamily`, so the reduced star problem reuses it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy.optimize import brentq

from . import kernels
from .errors import DegreeMismatch, MissingCondition, NotAnEigenvalue, WindowTooCoarse
from .graph import MetricGraph
from .scattering import ConditionSpec, VertexConditions, build_conditions

DEFAULT_TOL = 1e-8
REFINE_WIDTH = 1e-10
PHASE_REL_THRESHOLD = 1e-6
CLUSTER_WIDTH = 1e-9


@dataclass(frozen=True)
class UnitaryFamily:
    """``M(k) = diag(exp(i k left)) @ core @ diag(exp(i k right))``."""

    core: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def n(self) -> int:
        return self.core.shape[0]

    def matrix(self, kappa: float) -> np.ndarray:
        return np.exp(1j * kappa * self.left)[:, None] * self.core * np.exp(1j * kappa * self.right)[None, :]

    def gaps(self, kappas) -> np.ndarray:
        return kernels.secular_gaps(self.core, self.left, self.right, kappas)

    def gap(self, kappa: float) -> float:
        return float(self.gaps([kappa])[0])

    def phase_speed(self, v: np.ndarray) -> float:
        """d(arg lambda)/dk for the eigenpair with unit eigenvector ``v``."""
        return float(np.sum(np.abs(v) ** 2 * (self.left + self.right)))


@dataclass(frozen=True)
class EvolutionMatrix:
    kappa: float
    matrix: np.ndarray

    def unitarity_residual(self) -> float:
        u = self.matrix
        return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))

    def power(self, t: int) -> np.ndarray:
        return np.linalg.matrix_power(self.matrix, t)


@dataclass(frozen=True)
class EigenRecord:
    kappa: float
    a: np.ndarray
    residual: float
    multiplicity: int

    def __post_init__(self):
        a = np.array(self.a, dtype=complex)
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def simple(self) -> bool:
        return self.multiplicity <= 1

    @property
    def weights(self) -> np.ndarray:
        w = np.abs(self.a) ** 2
        return w / w.sum()


@dataclass
class SpectralScan:
    kappa_min: float
    kappa_max: float
    grid_step: float
    tolerance: float
    records: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    def simple_records(self) -> list:
        return [r for r in self.records if r.simple]

    @property
    def kappas(self) -> np.ndarray:
        return np.array([r.kappa for r in self.records])


def _conditions(g: MetricGraph, conds) -> VertexConditions:
    if isinstance(conds, VertexConditions):
        if conds.graph is not g:
            deg = g.degrees()
            for v in range(g.V):
                if v not in conds:
                    raise MissingCondition(f"no scattering matrix for vertex {v}")
                if conds[v].degree != deg[v]:
                    raise DegreeMismatch(f"vertex {v} has degree {deg[v]} but its matrix is {conds[v].degree}x{conds[v].degree}")
        return conds
    return build_conditions(g, conds)


def scattering_core(g: MetricGraph, conds: VertexConditions | Mapping[int, ConditionSpec] | ConditionSpec) -> np.ndarray:
    """The k-independent part of ``U``: vertex matrices scattered into bond slots."""
    conds = _conditions(g, conds)
    core = np.zeros((g.B, g.B), dtype=complex)
    for v in range(g.V):
        out = g.outgoing(v)
        inc = g.incoming(v)
        core[np.ix_(out, inc)] = conds[v].matrix
    return core


def evolution_family(g: MetricGraph, conds) -> UnitaryFamily:
    return UnitaryFamily(scattering_core(g, conds), np.zeros(g.B), np.array(g.bond_length, dtype=float))


def evolution_matrix(g: MetricGraph, conds, kappa: float) -> EvolutionMatrix:
    if not kappa > 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return EvolutionMatrix(float(kappa), evolution_family(g, conds).matrix(kappa))


def secular_gap(g: MetricGraph, conds, kappa: float) -> float:
    """Smallest singular value of ``I - U(kappa)``; zero exactly on the spectrum."""
    return evolution_family(g, conds).gap(kappa)


def default_grid_step(total_length: float) -> float:
    return math.pi / (8.0 * total_length)


def fix_phase(a: np.ndarray, rel: float = PHASE_REL_THRESHOLD) -> np.ndarray:
    """Rotate so the first entry above ``rel * max|a|`` is real and positive."""
    mod = np.abs(a)
    k = int(np.argmax(mod > rel * mod.max()))
    return a * (np.conj(a[k]) / mod[k])


def null_vector(m: np.ndarray, tol: float):
    """Unit null vector of ``I - m`` with gap, residual and multiplicity."""
    n = m.shape[0]
    _, s, vh = np.linalg.svd(np.eye(n) - m)
    gap = float(s[-1])
    if gap > tol:
        raise NotAnEigenvalue(f"smallest singular value {gap:.3e} exceeds tolerance {tol:.1e}")
    a = fix_phase(vh[-1].conj())
    a /= np.linalg.norm(a)
    residual = float(np.linalg.norm(m @ a - a))
    multiplicity = int(np.sum(s < 10 * tol))
    return a, residual, max(multiplicity, 1)


def _polish(family: UnitaryFamily, kappa: float, gap: float, max_shift: float, iters: int = 6):
    """Newton iterations on the eigenphase closest to zero."""
    k0, best_k, best_gap = kappa, kappa, gap
    k = kappa
    for _ in range(iters):
        w, vecs = np.linalg.eig(family.matrix(k))
        j = int(np.argmin(np.abs(w - 1.0)))
        v = vecs[:, j] / np.linalg.norm(vecs[:, j])
        speed = family.phase_speed(v)
        if speed <= 0:
            break
        step = float(np.angle(w[j])) / speed
        k = k - step
        if abs(k - k0) > max_shift:
            break
        gk = family.gap(k)
        if gk < best_gap:
            best_k, best_gap = k, gk
        if abs(step) <= 4 * np.finfo(float).eps * max(abs(k), 1.0):
            break
    return best_k, best_gap


def _golden(family: UnitaryFamily, a: float, b: float):
    k, gap = kernels.golden_minimize(family.core, family.left, family.right, a, b, REFINE_WIDTH)
    return _polish(family, k, gap, max_shift=b - a)


class _Counter:
    """Exact number of spectral points in a window, from eigenphase sums.

    Every eigenphase of ``M(k)`` increases with ``k`` and their sum grows at
    the constant rate ``sum(left + right)``.  Taking phases in ``[0, 2 pi)``,
    each crossing of eigenvalue 1 drops the principal sum by ``2 pi``, so
    the number of crossings in ``(a, b]`` is
    ``(rate (b - a) - sum(b) + sum(a)) / (2 pi)``, an integer.
    """

    def __init__(self, family: UnitaryFamily):
        self.family = family
        self.rate = float(np.sum(family.left) + np.sum(family.right))
        n = family.n
        # det(I - M) exp(-i offset - i k rate / 2) is real for unitary M
        self.offset = 0.5 * float(np.angle(np.linalg.det(family.core))) + 0.5 * n * math.pi

    def sums(self, kappas) -> np.ndarray:
        f = self.family
        return kernels.phase_sums(f.core, f.left, f.right, kappas)

    def count(self, a: float, b: float, sa: float, sb: float) -> int:
        x = (self.rate * (b - a) - sb + sa) / (2.0 * math.pi)
        c = int(round(x))
        if abs(x - c) > 0.25 or c < 0:
            raise ArithmeticError(f"eigenphase count on [{a}, {b}] is not an integer: {x}")
        return c

    def real_secular(self, k: float) -> float:
        f = self.family
        return kernels.real_secular(f.core, f.left, f.right, self.offset, 0.5 * self.rate, k)


def _single_root(counter: _Counter, a: float, b: float):
    """The one crossing in ``(a, b]``: a sign change of the real secular function."""
    family = counter.family
    za, zb = counter.real_secular(a), counter.real_secular(b)
    if za * zb < 0:
        k = brentq(counter.real_secular, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
        return k, family.gap(k)
    # the crossing sits on an endpoint to rounding
    return _golden(family, a, b)


def _isolate(counter: _Counter, a: float, b: float, sa: float, sb: float, c: int, out: list):
    stack = [(a, b, sa, sb, c)]
    while stack:
        a, b, sa, sb, c = stack.pop()
        if c == 0:
            continue
        if c == 1:
            out.append((*_single_root(counter, a, b), 1))
        elif b - a <= CLUSTER_WIDTH:
            k, gap = _golden(counter.family, a, b)
            out.append((k, gap, c))
        else:
            m = 0.5 * (a + b)
            sm = float(counter.sums([m])[0])
            c1 = counter.count(a, m, sa, sm)
            stack.append((m, b, sm, sb, c - c1))
            stack.append((a, m, sa, sm, c1))


def scan_roots(family: UnitaryFamily, kappa_min: float, kappa_max: float, grid_step: float,
               tol: float = DEFAULT_TOL):
    """Locate zeros of the secular gap of ``family`` inside ``[kappa_min, kappa_max]``.

    Returns ``(roots, messages)`` with ``roots`` a sorted list of
    ``(kappa, gap)``.  The number of spectral points in each grid interval
    is known exactly (see :class:`_Counter`); intervals holding several are
    bisected until each holds one, which is then located by Brent's method
    on the real secular function.  Points that stay together below
    ``CLUSTER_WIDTH`` are treated as one degenerate point and refined by
    golden-section search on the gap.  Grid intervals holding more than one
    distinct point raise :class:`WindowTooCoarse`; those points are still
    resolved.
    """
    if not 0 < kappa_min < kappa_max:
        raise ValueError(f"need 0 < kappa_min < kappa_max, got ({kappa_min}, {kappa_max})")
    if not grid_step > 0:
        raise ValueError(f"grid step must be positive, got {grid_step}")
    counter = _Counter(family)
    n = max(1, int(math.ceil((kappa_max - kappa_min) / grid_step)))
    grid = np.linspace(kappa_min, kappa_max, n + 1)
    sums = counter.sums(grid)
    found = []
    messages = []
    for i in range(n):
        c = counter.count(grid[i], grid[i + 1], sums[i], sums[i + 1])
        if c == 0:
            continue
        local = []
        _isolate(counter, grid[i], grid[i + 1], sums[i], sums[i + 1], c, local)
        if len(local) > 1:
            ks = ", ".join(f"{k:.10g}" for k, *_ in sorted(local))
            msg = f"spectral points {ks} share one grid interval; reduce the grid step"
            messages.append(msg)
            warnings.warn(msg, WindowTooCoarse, stacklevel=3)
        found.extend(local)
    found.sort()
    roots = []
    for k, gap, _ in found:
        if gap > tol:
            msg = f"crossing near kappa={k:.10g} not resolved below tolerance (gap {gap:.3e})"
            messages.append(msg)
            warnings.warn(msg, RuntimeWarning, stacklevel=3)
            continue
        if roots and abs(k - roots[-1][0]) < 1e-8:
            if gap < roots[-1][1]:
                roots[-1] = (k, gap)
            continue
        roots.append((k, gap))
    return roots, messages


def eigenvector_at(g: MetricGraph, conds, kappa: float, tol: float = DEFAULT_TOL) -> EigenRecord:
    a, residual, mult = null_vector(evolution_family(g, conds).matrix(kappa), tol)
    return EigenRecord(float(kappa), a, residual, mult)


def find_spectrum(g: MetricGraph, conds, kappa_min: float, kappa_max: float,
                  grid_step: float | None = None, tol: float = DEFAULT_TOL) -> SpectralScan:
    """All spectral ``kappa`` in the window, each with its :class:`EigenRecord`.

    ``grid_step`` defaults to an eighth of the mean level spacing
    ``pi / total_length``.
    """
    conds = _conditions(g, conds)
    step = grid_step if grid_step is not None else default_grid_step(g.total_length)
    family = evolution_family(g, conds)
    roots, messages = scan_roots(family, kappa_min, kappa_max, step, tol)
    scan = SpectralScan(kappa_min, kappa_max, step, tol, warnings=messages)
    for k, _ in roots:
        a, residual, mult = null_vector(family.matrix(k), tol)
        scan.records.append(EigenRecord(float(k), a, residual, mult))
    return scan


def max_entry_modulus(u: np.ndarray) -> float:
    return float(np.max(np.abs(u)))


def max_entry_modulus_power(g: MetricGraph, conds, kappa: float, t: int) -> float:
    """Largest entry modulus of ``U(kappa)**t``."""
    if t < 1:
        raise ValueError(f"power must be >= 1, got {t}")
    return max_entry_modulus(evolution_matrix(g, conds, kappa).power(t))


def verify_vertex_conditions(g: MetricGraph, conds, rec: EigenRecord, tol: float = 1e-7) -> bool:
    """Check the matching relations vertex by vertex, without assembling ``U``.

    At every vertex the outgoing amplitudes must equal the scattered,
    phase-advanced incoming ones.  At Neumann vertices the reconstructed
    edge functions must also agree at the vertex and their outward
    derivatives must sum to zero.
    """
    conds = _conditions(g, conds)
    a = np.asarray(rec.a, dtype=complex)
    k = rec.kappa
    for v in range(g.V):
        out = g.outgoing(v)
        inc = g.incoming(v)
        arriving = a[inc] * np.exp(1j * k * g.bond_length[inc])
        if np.max(np.abs(a[out] - conds[v].matrix @ arriving)) > tol:
            return False
        if conds[v].kind == "neumann":
            values = a[out] + arriving
            if np.max(np.abs(values - values[0])) > tol:
                return False
            if abs(np.sum(1j * k * (a[out] - arriving))) > tol * max(k, 1.0) * len(out):
                return False
    return True


def _pnorm(x: np.ndarray, p: float) -> float:
    m = np.abs(x)
    if math.isinf(p):
        return float(m.max())
    top = m.max()
    if top == 0:
        return 0.0
    # factor out the largest entry so that large p cannot overflow
    return float(top * np.sum((m / top) ** p) ** (1.0 / p))


def riesz_inequality_check(u: np.ndarray, a: np.ndarray, q: float) -> float:
    """Smallest slack of the pair of Riesz-type norm inequalities.

    With ``eta = max|u_ij|``, ``1/p + 1/q = 1`` and ``1 <= q <= 2``::

        ||u a||_p <= eta**((2 - q)/q) ||a||_q
        ||a||_p   <= eta**((2 - q)/q) ||u a||_q

    Returns ``min(rhs - lhs)`` over both; nonnegative for unitary ``u``.
    """
    if not 1.0 <= q <= 2.0:
        raise ValueError(f"q must lie in [1, 2], got {q}")
    a = np.asarray(a, dtype=complex)
    if not np.any(a):
        raise ValueError("a must be nonzero")
    p = math.inf if q == 1.0 else q / (q - 1.0)
    ua = u @ a
    c = max_entry_modulus(u) ** ((2.0 - q) / q)
    first = c * _pnorm(a, q) - _pnorm(ua, p)
    twin = c * _pnorm(ua, q) - _pnorm(a, p)
    return min(first, twin)
