# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled hot kernels: nondominated sorting, IGD distances, SMO solver.

Operation-for-operation identical to the pure-Python fallbacks in
``_kernels_py`` (same arithmetic order, same PRNG, FMA contraction disabled
at compile time), so both backends produce bit-equal results.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport fabs
from libc.stdint cimport int64_t, uint8_t, uint64_t

cnp.import_array()

# keep in sync with _kernels_py.SMO_MIN_STEP
cdef double _SMO_MIN_STEP = 1e-8


cdef inline uint64_t _splitmix_next(uint64_t *state) noexcept nogil:
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    cdef uint64_t z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


def nondominated_ranks(objs):
    """Fast nondominated sorting of an (n, m) objective matrix.

    Returns ``(ranks, fronts)``; see the fallback for the full contract.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] F = \
        np.ascontiguousarray(objs, dtype=np.float64)
    cdef Py_ssize_t n = F.shape[0]
    cdef Py_ssize_t m = F.shape[1]
    if n == 0:
        return np.zeros(0, dtype=np.int64), []

    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] dom = \
        np.zeros((n, n), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] counts = \
        np.zeros(n, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] ranks = \
        np.full(n, -1, dtype=np.int64)

    cdef Py_ssize_t i, j, k
    cdef bint le, lt
    cdef double a, b
    with nogil:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                le = True
                lt = False
                for k in range(m):
                    a = F[i, k]
                    b = F[j, k]
                    if a > b:
                        le = False
                        break
                    elif a < b:
                        lt = True
                if le and lt:
                    dom[i, j] = 1
                    counts[j] += 1

    fronts = []
    cdef cnp.ndarray[cnp.uint8_t, ndim=1, mode="c"] remaining = \
        np.ones(n, dtype=np.uint8)
    cdef Py_ssize_t level = 0
    cdef Py_ssize_t n_left = n
    cdef Py_ssize_t fsize
    cdef cnp.ndarray[cnp.int64_t, ndim=1, mode="c"] front
    while n_left > 0:
        fsize = 0
        for i in range(n):
            if remaining[i] and counts[i] == 0:
                fsize += 1
        front = np.empty(fsize, dtype=np.int64)
        fsize = 0
        for i in range(n):
            if remaining[i] and counts[i] == 0:
                front[fsize] = i
                fsize += 1
        for k in range(fsize):
            i = front[k]
            ranks[i] = level
            remaining[i] = 0
            for j in range(n):
                if dom[i, j]:
                    counts[j] -= 1
        n_left -= fsize
        fronts.append(front)
        level += 1
    return ranks, fronts


def min_sq_dists(ref, approx):
    """Per reference point, squared distance to the nearest approximation
    point.  Shapes (r, m) and (a, m) -> (r,)."""
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] R = \
        np.ascontiguousarray(ref, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] A = \
        np.ascontiguousarray(approx, dtype=np.float64)
    cdef Py_ssize_t nr = R.shape[0]
    cdef Py_ssize_t na = A.shape[0]
    cdef Py_ssize_t m = R.shape[1]
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] out = \
        np.empty(nr, dtype=np.float64)
    cdef Py_ssize_t i, j, k
    cdef double best, d, diff
    with nogil:
        for i in range(nr):
            best = 0.0
            for j in range(na):
                d = 0.0
                for k in range(m):
                    diff = R[i, k] - A[j, k]
                    d += diff * diff
                if j == 0 or d < best:
                    best = d
            out[i] = best
    return out


cdef inline double _margin(double[:, ::1] k, double[::1] alpha,
                           double[::1] y, double b, Py_ssize_t i,
                           Py_ssize_t m) noexcept nogil:
    cdef double s = b
    cdef double a
    cdef Py_ssize_t j
    for j in range(m):
        a = alpha[j]
        if a != 0.0:
            s += a * y[j] * k[j, i]
    return s


def smo_solve(gram, labels, double c, double tol, long max_passes,
              long max_iterations, seed):
    """Sequential minimal optimization on a precomputed Gram matrix.

    Same contract and arithmetic as the fallback implementation; returns
    ``(alpha, bias, iterations, converged)``.
    """
    cdef cnp.ndarray[cnp.float64_t, ndim=2, mode="c"] K_arr = \
        np.ascontiguousarray(gram, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] y_arr = \
        np.ascontiguousarray(labels, dtype=np.float64)
    cdef double[:, ::1] k = K_arr
    cdef double[::1] y = y_arr
    cdef Py_ssize_t m = y_arr.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1, mode="c"] alpha_arr = \
        np.zeros(m, dtype=np.float64)
    cdef double[::1] alpha = alpha_arr

    cdef double b = 0.0
    cdef uint64_t state = <uint64_t>(int(seed) & ((1 << 64) - 1))
    cdef long passes = 0
    cdef long iterations = 0
    cdef long violations, n_unb
    cdef Py_ssize_t i, j
    cdef double e_i, e_j, r_i, a_i_old, a_j_old, a_i, a_j
    cdef double lo, hi, eta, d_i, d_j, b1, b2
    cdef double acc, cand, a_cur, blo, bhi
    cdef bint has_lo, has_hi

    with nogil:
        while passes < max_passes and iterations < max_iterations:
            violations = 0
            for i in range(m):
                iterations += 1
                e_i = _margin(k, alpha, y, b, i, m) - y[i]
                r_i = y[i] * e_i
                if not ((r_i < -tol and alpha[i] < c)
                        or (r_i > tol and alpha[i] > 0.0)):
                    continue
                violations += 1
                j = <Py_ssize_t>(_splitmix_next(&state) % <uint64_t>(m - 1))
                if j >= i:
                    j += 1
                e_j = _margin(k, alpha, y, b, j, m) - y[j]
                a_i_old = alpha[i]
                a_j_old = alpha[j]
                if y[i] != y[j]:
                    lo = max(0.0, a_j_old - a_i_old)
                    hi = min(c, c + a_j_old - a_i_old)
                else:
                    lo = max(0.0, a_i_old + a_j_old - c)
                    hi = min(c, a_i_old + a_j_old)
                if lo == hi:
                    continue
                eta = 2.0 * k[i, j] - k[i, i] - k[j, j]
                if eta >= 0.0:
                    continue
                a_j = a_j_old - y[j] * (e_i - e_j) / eta
                if a_j > hi:
                    a_j = hi
                elif a_j < lo:
                    a_j = lo
                if fabs(a_j - a_j_old) < _SMO_MIN_STEP:
                    continue
                if a_j < _SMO_MIN_STEP:
                    a_j = 0.0
                elif a_j > c - _SMO_MIN_STEP:
                    a_j = c
                a_i = a_i_old + y[i] * y[j] * (a_j_old - a_j)
                if a_i < _SMO_MIN_STEP:
                    a_i = 0.0
                elif a_i > c - _SMO_MIN_STEP:
                    a_i = c
                d_i = y[i] * (a_i - a_i_old)
                d_j = y[j] * (a_j - a_j_old)
                b1 = b - e_i - d_i * k[i, i] - d_j * k[i, j]
                b2 = b - e_j - d_i * k[i, j] - d_j * k[j, j]
                if 0.0 < a_i and a_i < c:
                    b = b1
                elif 0.0 < a_j and a_j < c:
                    b = b2
                else:
                    b = 0.5 * (b1 + b2)
                alpha[i] = a_i
                alpha[j] = a_j
            acc = 0.0
            n_unb = 0
            blo = 0.0
            bhi = 0.0
            has_lo = False
            has_hi = False
            for i in range(m):
                cand = y[i] - _margin(k, alpha, y, b, i, m) + b
                a_cur = alpha[i]
                if 0.0 < a_cur and a_cur < c:
                    acc += cand
                    n_unb += 1
                elif (a_cur <= 0.0) == (y[i] > 0.0):
                    if (not has_lo) or cand > blo:
                        blo = cand
                    has_lo = True
                else:
                    if (not has_hi) or cand < bhi:
                        bhi = cand
                    has_hi = True
            if n_unb > 0:
                b = acc / <double>n_unb
            elif has_lo and has_hi:
                b = 0.5 * (blo + bhi)
            elif has_lo:
                b = blo
            elif has_hi:
                b = bhi
            if violations == 0:
                passes += 1
            else:
                passes = 0

        for i in range(m):
            if alpha[i] < 0.0:
                alpha[i] = 0.0
            elif alpha[i] > c:
                alpha[i] = c

    return alpha_arr, b, iterations, passes >= max_passes
