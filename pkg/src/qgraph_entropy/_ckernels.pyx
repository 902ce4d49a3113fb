# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Compiled secular-equation kernels.

The unitary family is ``M(k) = diag(exp(i k left)) @ S @ diag(exp(i k right))``.
Three quantities are evaluated on reused LAPACK workspaces: the smallest
singular value of ``I - M(k)`` (``zgesvd``), the sum of the eigenphases of
``M(k)`` taken in ``[0, 2 pi)`` (``zgeev``) and the real form of
``det(I - M(k))`` (``zgetrf``).
"""

import numpy as np

from libc.math cimport M_PI, atan2, cos, sin, sqrt
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zgeev, zgesvd, zgetrf


cdef class _Workspace:
    cdef int n
    cdef int lwork
    cdef double complex *a
    cdef double complex *work
    cdef double complex *pl
    cdef double complex *pr
    cdef double complex dummy[1]
    cdef double *s
    cdef double *rwork

    def __cinit__(self, int n):
        cdef int info = 0, lwork = -1, one = 1
        cdef double complex query
        cdef char job = b'N'
        self.n = n
        self.a = <double complex *> malloc(n * n * sizeof(double complex))
        self.pl = <double complex *> malloc(n * sizeof(double complex))
        self.pr = <double complex *> malloc(n * sizeof(double complex))
        self.s = <double *> malloc(n * sizeof(double))
        self.rwork = <double *> malloc(5 * n * sizeof(double))
        if not (self.a and self.pl and self.pr and self.s and self.rwork):
            raise MemoryError()
        zgesvd(&job, &job, &n, &n, self.a, &n, self.s, self.dummy, &one,
               self.dummy, &one, &query, &lwork, self.rwork, &info)
        self.lwork = max(<int> query.real, 3 * n)
        self.work = <double complex *> malloc(self.lwork * sizeof(double complex))
        if not self.work:
            raise MemoryError()

    def __dealloc__(self):
        free(self.a)
        free(self.pl)
        free(self.pr)
        free(self.s)
        free(self.rwork)
        free(self.work)


cdef double _gap(_Workspace ws, const double complex[:, ::1] S, const double[::1] left,
                 const double[::1] right, double kappa) noexcept nogil:
    cdef int n = ws.n, r, c, info = 0, one = 1, lwork = ws.lwork
    cdef char job = b'N'
    cdef double complex *a = ws.a
    for r in range(n):
        ws.pl[r] = cos(kappa * left[r]) + 1j * sin(kappa * left[r])
        ws.pr[r] = cos(kappa * right[r]) + 1j * sin(kappa * right[r])
    # column-major fill of I - M
    for c in range(n):
        for r in range(n):
            a[r + c * n] = -ws.pl[r] * S[r, c] * ws.pr[c]
        a[c + c * n] = a[c + c * n] + 1.0
    zgesvd(&job, &job, &n, &n, a, &n, ws.s, ws.dummy, &one, ws.dummy, &one,
           ws.work, &lwork, ws.rwork, &info)
    if info != 0:
        return -1.0
    return ws.s[n - 1]


def secular_gaps(S, left, right, kappas):
    """Smallest singular value of ``I - M(k)`` for every ``k`` in ``kappas``."""
    cdef const double complex[:, ::1] Sv = np.ascontiguousarray(S, dtype=np.complex128)
    cdef const double[::1] lv = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(right, dtype=np.float64)
    cdef const double[::1] kv = np.ascontiguousarray(np.atleast_1d(kappas), dtype=np.float64)
    cdef Py_ssize_t i, m = kv.shape[0]
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef _Workspace ws = _Workspace(Sv.shape[0])
    with nogil:
        for i in range(m):
            ov[i] = _gap(ws, Sv, lv, rv, kv[i])
    if m and out.min() < 0:
        raise ArithmeticError("zgesvd failed to converge")
    return out


def golden_minimize(S, left, right, double a, double b, double width):
    """Golden-section minimisation of the gap on ``[a, b]`` down to ``width``.

    Returns ``(kappa, gap)`` at the midpoint of the final bracket.
    """
    cdef const double complex[:, ::1] Sv = np.ascontiguousarray(S, dtype=np.complex128)
    cdef const double[::1] lv = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(right, dtype=np.float64)
    cdef _Workspace ws = _Workspace(Sv.shape[0])
    cdef double invphi = (sqrt(5.0) - 1.0) / 2.0
    cdef double c, d, fc, fd, x, fx
    with nogil:
        c = b - invphi * (b - a)
        d = a + invphi * (b - a)
        fc = _gap(ws, Sv, lv, rv, c)
        fd = _gap(ws, Sv, lv, rv, d)
        while b - a > width:
            if fc < fd:
                b = d
                d = c
                fd = fc
                c = b - invphi * (b - a)
                fc = _gap(ws, Sv, lv, rv, c)
            else:
                a = c
                c = d
                fc = fd
                d = a + invphi * (b - a)
                fd = _gap(ws, Sv, lv, rv, d)
        x = 0.5 * (a + b)
        fx = _gap(ws, Sv, lv, rv, x)
    if fx < 0:
        raise ArithmeticError("zgesvd failed to converge")
    return x, fx


cdef class _EigWorkspace:
    cdef int n
    cdef int lwork
    cdef double complex *a
    cdef double complex *w
    cdef double complex *work
    cdef double complex dummy[1]
    cdef double *rwork
    cdef int *ipiv

    def __cinit__(self, int n):
        cdef int info = 0, lwork = -1, one = 1
        cdef double complex query
        cdef char job = b'N'
        self.n = n
        self.a = <double complex *> malloc(n * n * sizeof(double complex))
        self.w = <double complex *> malloc(n * sizeof(double complex))
        self.rwork = <double *> malloc(2 * n * sizeof(double))
        self.ipiv = <int *> malloc(n * sizeof(int))
        if not (self.a and self.w and self.rwork and self.ipiv):
            raise MemoryError()
        zgeev(&job, &job, &n, self.a, &n, self.w, self.dummy, &one, self.dummy, &one,
              &query, &lwork, self.rwork, &info)
        self.lwork = max(<int> query.real, 2 * n)
        self.work = <double complex *> malloc(self.lwork * sizeof(double complex))
        if not self.work:
            raise MemoryError()

    def __dealloc__(self):
        free(self.a)
        free(self.w)
        free(self.rwork)
        free(self.ipiv)
        free(self.work)


cdef void _fill_family(double complex *a, int n, const double complex[:, ::1] S, const double[::1] left,
                       const double[::1] right, double kappa, double sign) noexcept nogil:
    # column-major ``sign * M(k)``
    cdef int r, c
    cdef double complex pc
    for c in range(n):
        pc = cos(kappa * right[c]) + 1j * sin(kappa * right[c])
        for r in range(n):
            a[r + c * n] = sign * (cos(kappa * left[r]) + 1j * sin(kappa * left[r])) * S[r, c] * pc


cdef double _phase_sum(_EigWorkspace ws, const double complex[:, ::1] S, const double[::1] left,
                       const double[::1] right, double kappa) noexcept nogil:
    cdef int n = ws.n, j, info = 0, one = 1, lwork = ws.lwork
    cdef char job = b'N'
    cdef double t, total = 0.0
    _fill_family(ws.a, n, S, left, right, kappa, 1.0)
    zgeev(&job, &job, &n, ws.a, &n, ws.w, ws.dummy, &one, ws.dummy, &one,
          ws.work, &lwork, ws.rwork, &info)
    if info != 0:
        return -1.0
    for j in range(n):
        t = atan2(ws.w[j].imag, ws.w[j].real)
        if t < 0:
            t += 2.0 * M_PI
        total += t
    return total


def phase_sums(S, left, right, kappas):
    """Sum of the eigenphases of ``M(k)``, each in ``[0, 2 pi)``, for every ``k``."""
    cdef const double complex[:, ::1] Sv = np.ascontiguousarray(S, dtype=np.complex128)
    cdef const double[::1] lv = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(right, dtype=np.float64)
    cdef const double[::1] kv = np.ascontiguousarray(np.atleast_1d(kappas), dtype=np.float64)
    cdef Py_ssize_t i, m = kv.shape[0]
    out = np.empty(m)
    cdef double[::1] ov = out
    cdef _EigWorkspace ws = _EigWorkspace(Sv.shape[0])
    with nogil:
        for i in range(m):
            ov[i] = _phase_sum(ws, Sv, lv, rv, kv[i])
    if m and out.min() < 0:
        raise ArithmeticError("zgeev failed to converge")
    return out


def real_secular(S, left, right, double offset, double speed, double kappa):
    """``Re[det(I - M(k)) exp(-i (offset + k speed))]``.

    With ``offset = arg(det S) / 2 + n pi / 2`` and ``speed = sum(left + right) / 2``
    the bracketed expression is real, so the result changes sign at every
    simple zero.
    """
    cdef const double complex[:, ::1] Sv = np.ascontiguousarray(S, dtype=np.complex128)
    cdef const double[::1] lv = np.ascontiguousarray(left, dtype=np.float64)
    cdef const double[::1] rv = np.ascontiguousarray(right, dtype=np.float64)
    cdef _EigWorkspace ws = _EigWorkspace(Sv.shape[0])
    cdef int n = ws.n, j, info = 0
    cdef double complex det = 1.0
    cdef double ph
    with nogil:
        _fill_family(ws.a, n, Sv, lv, rv, kappa, -1.0)
        for j in range(n):
            ws.a[j + j * n] = ws.a[j + j * n] + 1.0
        zgetrf(&n, &n, ws.a, &n, ws.ipiv, &info)
        for j in range(n):
            det = det * ws.a[j + j * n]
            if ws.ipiv[j] != j + 1:
                det = -det
        ph = offset + kappa * speed
        det = det * (cos(ph) - 1j * sin(ph))
    if info < 0:
        raise ArithmeticError("zgetrf failed")
    return det.real
