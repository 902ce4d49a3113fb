"""Generalized entropies of probability vectors built from amplitudes.

Conventions: ``0**alpha = 0`` and ``0 ln 0 = 0`` (zero weights are dropped
from every sum); the rank used by the max-entropy counts weights above
:data:`RANK_THRESHOLD`.  All logarithms are natural.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import NonpositiveArgument, UnsupportedOrder, ZeroVector

RANK_THRESHOLD = 1e-12
WEIGHT_SUM_TOL = 1e-12


def weights_from_amplitudes(a) -> np.ndarray:
    """``w_b = |a_b|^2 / ||a||_2^2``."""
    m = np.abs(np.asarray(a, dtype=complex)) ** 2
    total = m.sum()
    if not total > 0:
        raise ZeroVector("cannot form weights from the zero vector")
    return m / total


def _as_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    if w.ndim != 1 or w.size == 0:
        raise ValueError("weights must be a nonempty 1-d array")
    if np.any(w < 0) or abs(w.sum() - 1.0) > WEIGHT_SUM_TOL * max(1, w.size):
        raise ValueError("weights must be nonnegative and sum to 1")
    return w


def shannon(w) -> float:
    w = _as_weights(w)
    p = w[w > 0]
    return float(-np.sum(p * np.log(p)))


def rank(w) -> int:
    w = _as_weights(w)
    return int(np.count_nonzero(w > RANK_THRESHOLD))


def _log_power_sum(p: np.ndarray, alpha: float) -> float:
    """``ln sum p**alpha`` for normalized ``p``.

    Below order 2 the sum is written as ``1 + sum p (p**(alpha-1) - 1)`` to
    stay accurate near ``alpha = 1``; above it the largest weight is
    factored out so that high orders do not underflow.
    """
    if alpha < 2.0:
        return math.log1p(float(np.sum(p * np.expm1((alpha - 1.0) * np.log(p)))))
    top = p.max()
    return alpha * math.log(top) + math.log(np.sum((p / top) ** alpha))


def renyi(w, alpha: float) -> float:
    """Rényi entropy of order ``alpha`` in ``[0, inf]``.

    ``alpha = 0`` gives ``ln(rank)``, ``alpha = 1`` Shannon and
    ``alpha = inf`` the min-entropy ``-ln max w``.
    """
    w = _as_weights(w)
    if alpha < 0 or math.isnan(alpha):
        raise UnsupportedOrder(f"Rényi order must lie in [0, inf], got {alpha}")
    if alpha == 0:
        return math.log(rank(w))
    if alpha == 1:
        return shannon(w)
    if math.isinf(alpha):
        return -math.log(w.max())
    p = w[w > 0]
    return _log_power_sum(p, alpha) / (1.0 - alpha)


def min_entropy(w) -> float:
    return renyi(w, math.inf)


def max_entropy(w) -> float:
    return renyi(w, 0.0)


def alpha_log(xi, alpha: float):
    """``(xi**(1 - alpha) - 1) / (1 - alpha)``, and ``ln xi`` at ``alpha = 1``."""
    x = np.asarray(xi, dtype=float)
    if np.any(x <= 0):
        raise NonpositiveArgument(f"alpha-logarithm needs xi > 0, got {xi}")
    if alpha == 1:
        out = np.log(x)
    else:
        out = np.expm1((1.0 - alpha) * np.log(x)) / (1.0 - alpha)
    return float(out) if out.ndim == 0 else out


def tsallis(w, alpha: float) -> float:
    """Tsallis entropy ``(sum w**alpha - 1) / (1 - alpha)`` for ``alpha > 0``."""
    w = _as_weights(w)
    if not alpha > 0 or math.isinf(alpha):
        raise UnsupportedOrder(f"Tsallis order must lie in (0, inf), got {alpha}")
    if alpha == 1:
        return shannon(w)
    p = w[w > 0]
    # sum p**alpha - 1 == sum p * (p**(alpha-1) - 1); expm1 keeps it accurate near alpha = 1
    return float(np.sum(p * np.expm1((alpha - 1.0) * np.log(p)))) / (1.0 - alpha)


def tsallis_log_form(w, alpha: float) -> float:
    """Tsallis entropy written as ``sum w ln_alpha(1/w)``; agrees with :func:`tsallis`."""
    w = _as_weights(w)
    if not alpha > 0 or math.isinf(alpha):
        raise UnsupportedOrder(f"Tsallis order must lie in (0, inf), got {alpha}")
    if alpha == 1:
        return shannon(w)
    p = w[w > 0]
    x = -(1.0 - alpha) * np.log(p)  # (1 - alpha) ln(1/p)
    # p * expm1(x), folded into one exponential where expm1 alone would overflow
    terms = np.empty_like(p)
    ok = x <= 700.0
    terms[ok] = p[ok] * np.expm1(x[ok])
    terms[~ok] = np.exp(x[~ok] + np.log(p[~ok])) - p[~ok]
    return float(np.sum(terms)) / (1.0 - alpha)


def conjugate_orders(s: float) -> tuple[float, float]:
    """``(alpha, beta) = (1/(1-s), 1/(1+s))``, so that ``1/alpha + 1/beta = 2``."""
    if not 0.0 <= s <= 1.0:
        raise UnsupportedOrder(f"s must lie in [0, 1], got {s}")
    alpha = math.inf if s == 1.0 else 1.0 / (1.0 - s)
    return alpha, 1.0 / (1.0 + s)


def symmetrized(w, s: float, family: str = "renyi") -> float:
    """Half-sum of the entropies at the conjugate orders parametrized by ``s``.

    For the Rényi family the endpoint ``s = 1`` is taken, by definition, as
    ``(R_min + R_max) / 2``.  Tsallis requires ``s < 1``.
    """
    if family == "renyi":
        if s == 1.0:
            return 0.5 * (min_entropy(w) + max_entropy(w))
        alpha, beta = conjugate_orders(s)
        return 0.5 * (renyi(w, alpha) + renyi(w, beta))
    if family == "tsallis":
        if s >= 1.0:
            raise UnsupportedOrder("symmetrized Tsallis entropy is not defined at s = 1")
        alpha, beta = conjugate_orders(s)
        return 0.5 * (tsallis(w, alpha) + tsallis(w, beta))
    raise ValueError(f"unknown entropy family {family!r}")


def variance(w) -> float:
    """``D = -1 + B sum w**2``; equals ``B**-1 sum (B w - 1)**2``."""
    w = _as_weights(w)
    return float(-1.0 + w.size * np.dot(w, w))


def variance_from_definition(w) -> float:
    w = _as_weights(w)
    B = w.size
    return float(np.sum((B * w - 1.0) ** 2) / B)


def entropy(w, order: float, family: str = "renyi") -> float:
    if family == "renyi":
        return renyi(w, order)
    if family == "tsallis":
        return tsallis(w, order)
    raise ValueError(f"unknown entropy family {family!r}")


def max_value(B: int, order: float, family: str = "renyi") -> float:
    """Largest attainable entropy over ``B`` weights (the uniform vector)."""
    if family == "renyi":
        return math.log(B)
    return alpha_log(float(B), order)
