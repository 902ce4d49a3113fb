"""Pure numpy implementation of the secular-equation kernels.

Same contract as the compiled ``_ckernels`` module; used when the extension
is unavailable or ``QGRAPH_ENTROPY_PURE_PYTHON`` is set.
"""

import math

import numpy as np

_CHUNK_ENTRIES = 1 << 22


def _family(S, left, right, kappas):
    pl = np.exp(1j * np.multiply.outer(kappas, left))
    pr = np.exp(1j * np.multiply.outer(kappas, right))
    return pl[:, :, None] * S[None, :, :] * pr[:, None, :]


def secular_gaps(S, left, right, kappas):
    S = np.asarray(S, dtype=complex)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    n = S.shape[0]
    eye = np.eye(n)
    step = max(1, _CHUNK_ENTRIES // (n * n))
    out = np.empty(len(kappas))
    for start in range(0, len(kappas), step):
        block = eye - _family(S, left, right, kappas[start:start + step])
        out[start:start + step] = np.linalg.svd(block, compute_uv=False)[:, -1]
    return out


def golden_minimize(S, left, right, a, b, width):
    S = np.asarray(S, dtype=complex)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    n = S.shape[0]
    eye = np.eye(n)

    def f(k):
        m = eye - np.exp(1j * k * left)[:, None] * S * np.exp(1j * k * right)[None, :]
        return np.linalg.svd(m, compute_uv=False)[-1]

    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > width:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    x = 0.5 * (a + b)
    return x, float(f(x))


def phase_sums(S, left, right, kappas):
    S = np.asarray(S, dtype=complex)
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)
    kappas = np.atleast_1d(np.asarray(kappas, dtype=float))
    n = S.shape[0]
    step = max(1, _CHUNK_ENTRIES // (n * n))
    out = np.empty(len(kappas))
    for start in range(0, len(kappas), step):
        theta = np.angle(np.linalg.eigvals(_family(S, left, right, kappas[start:start + step])))
        out[start:start + step] = np.where(theta < 0, theta + 2 * math.pi, theta).sum(axis=1)
    return out


def real_secular(S, left, right, offset, speed, kappa):
    S = np.asarray(S, dtype=complex)
    m = np.exp(1j * kappa * np.asarray(left, dtype=float))[:, None] * S * np.exp(1j * kappa * np.asarray(right, dtype=float))[None, :]
    det = np.linalg.det(np.eye(S.shape[0]) - m)
    return float((det * np.exp(-1j * (offset + kappa * speed))).real)
