"""Pure-Python/numpy implementations of the hot kernels.

These are the fallback for the compiled extension (``_speedups``).  Both
backends are kept operation-for-operation identical so they produce
bit-equal results: the sorting kernel only compares floats, the distance
kernel uses the same elementwise operations and reduction order, and the
SMO solver below is a scalar transliteration of the Cython loop (IEEE
binary64 either way, and the extension is compiled with FMA contraction
disabled).
"""

import numpy as np

# Smallest coefficient step the SMO solver treats as progress.
SMO_MIN_STEP = 1e-8

_MASK64 = (1 << 64) - 1


class _SplitMix64:
    """Tiny deterministic PRNG, mirrored exactly by the compiled core."""

    __slots__ = ("state",)

    def __init__(self, seed):
        self.state = seed & _MASK64

    def next_u64(self):
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, n):
        return self.next_u64() % n


def nondominated_ranks(objs):
    """Fast nondominated sorting of an (n, m) objective matrix.

    Returns ``(ranks, fronts)`` where ranks is an int64 array and fronts a
    list of int64 index arrays (ascending within each front).  Minimization;
    a dominates b iff a <= b in every objective and a < b in at least one.
    """
    objs = np.ascontiguousarray(objs, dtype=np.float64)
    n = objs.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64), []
    le = (objs[:, None, :] <= objs[None, :, :]).all(axis=2)
    lt = (objs[:, None, :] < objs[None, :, :]).any(axis=2)
    dom = le & lt  # dom[i, j]: i dominates j
    counts = dom.sum(axis=0).astype(np.int64)

    ranks = np.full(n, -1, dtype=np.int64)
    fronts = []
    remaining = np.ones(n, dtype=bool)
    level = 0
    while remaining.any():
        front = np.nonzero(remaining & (counts == 0))[0]
        ranks[front] = level
        remaining[front] = False
        counts -= dom[front].sum(axis=0)
        fronts.append(front.astype(np.int64))
        level += 1
    return ranks, fronts


def min_sq_dists(ref, approx):
    """Per reference point, squared Euclidean distance to the nearest
    approximation point.  Shapes (r, m) and (a, m) -> (r,)."""
    ref = np.asarray(ref, dtype=np.float64)
    approx = np.asarray(approx, dtype=np.float64)
    diff = ref[:, None, :] - approx[None, :, :]
    return np.square(diff).sum(axis=2).min(axis=1)


def _margin(k, alpha, y, b, i, m):
    # decision value for training point i under the current coefficients
    s = b
    for j in range(m):
        a = alpha[j]
        if a != 0.0:
            s += a * y[j] * k[j][i]
    return s


def smo_solve(gram, labels, c, tol, max_passes, max_iterations, seed):
    """Sequential minimal optimization on a precomputed Gram matrix.

    Simplified working-set selection: sweep all coefficients, fix KKT
    violators against a uniformly drawn partner.  Terminates after
    ``max_passes`` consecutive violation-free sweeps or after
    ``max_iterations`` coefficient visits, whichever comes first.  A
    flagged violator keeps the pass counter at zero even when the drawn
    partner yields no usable step, so an unlucky draw cannot end
    training early.

    The threshold is re-anchored after every sweep (mean over unbounded
    support vectors, else the midpoint of the interval the bound points
    allow).  Pair steps cancel the threshold out, so without this a
    drifted running value could flag the same points forever after the
    coefficients have stopped moving.

    Returns ``(alpha, bias, iterations, converged)``.
    """
    k = [row.tolist() for row in np.asarray(gram, dtype=np.float64)]
    y = np.asarray(labels, dtype=np.float64).tolist()
    m = len(y)
    alpha = [0.0] * m
    b = 0.0
    rng = _SplitMix64(seed)
    passes = 0
    iterations = 0

    while passes < max_passes and iterations < max_iterations:
        violations = 0
        for i in range(m):
            iterations += 1
            e_i = _margin(k, alpha, y, b, i, m) - y[i]
            r_i = y[i] * e_i
            if not ((r_i < -tol and alpha[i] < c) or (r_i > tol and alpha[i] > 0.0)):
                continue
            violations += 1
            j = rng.below(m - 1)
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
            eta = 2.0 * k[i][j] - k[i][i] - k[j][j]
            if eta >= 0.0:
                continue
            a_j = a_j_old - y[j] * (e_i - e_j) / eta
            if a_j > hi:
                a_j = hi
            elif a_j < lo:
                a_j = lo
            if abs(a_j - a_j_old) < SMO_MIN_STEP:
                continue
            # snap near-bound coefficients exactly onto the box: rounding
            # dust left behind by the complementary update would otherwise
            # keep a slack point flagged as a support vector forever
            if a_j < SMO_MIN_STEP:
                a_j = 0.0
            elif a_j > c - SMO_MIN_STEP:
                a_j = c
            a_i = a_i_old + y[i] * y[j] * (a_j_old - a_j)
            if a_i < SMO_MIN_STEP:
                a_i = 0.0
            elif a_i > c - SMO_MIN_STEP:
                a_i = c
            d_i = y[i] * (a_i - a_i_old)
            d_j = y[j] * (a_j - a_j_old)
            b1 = b - e_i - d_i * k[i][i] - d_j * k[i][j]
            b2 = b - e_j - d_i * k[i][j] - d_j * k[j][j]
            if 0.0 < a_i < c:
                b = b1
            elif 0.0 < a_j < c:
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
            a = alpha[i]
            if 0.0 < a < c:
                acc += cand
                n_unb += 1
            elif (a <= 0.0) == (y[i] > 0.0):
                if not has_lo or cand > blo:
                    blo = cand
                has_lo = True
            else:
                if not has_hi or cand < bhi:
                    bhi = cand
                has_hi = True
        if n_unb > 0:
            b = acc / n_unb
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

    converged = passes >= max_passes
    # rounding safety: analytic updates keep alpha inside the box up to ulp noise
    for i in range(m):
        if alpha[i] < 0.0:
            alpha[i] = 0.0
        elif alpha[i] > c:
            alpha[i] = c
    return np.array(alpha, dtype=np.float64), b, iterations, converged
