"""Dynamic multi-objective benchmark problems.

Twelve standard functions from the dynamic-optimization literature: the
FDA family (Farina, Deb, Amato), the dMOP family (Goh, Tan), DIMP2 (Koo,
Goh, Tan) and the HE family (Helbig, Engelbrecht), including the isolated
and deceptive variants built from the WFG bias transformations.

Time enters every problem through ``t = floor(generation / tau_t) / n_t``
(see :class:`TimeController`); the common schedules are

    G(t) = sin(0.5 * pi * t)        (|.| for the FDA problems)
    H(t) = 0.75 * sin(0.5 * pi * t) + 1.25

Problems are classified by what moves when t changes:

    type I    the optimal decision vectors move, the front stays put
    type II   both move
    type III  only the front moves

Evaluation is pure and vectorized: a single decision vector or a batch of
them maps to objective vectors with no hidden state; repeated calls give
bitwise-identical answers.  Reference fronts are sampled on fixed uniform
grids, so they are deterministic too.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TYPE_I = "I"
TYPE_II = "II"
TYPE_III = "III"

_HALF_PI = 0.5 * math.pi


# ---------------------------------------------------------------------------
# time

@dataclass
class TimeController:
    """Generation-driven environment clock.

    ``n_t`` controls change severity (larger = smaller time steps),
    ``tau_t`` is the number of generations between changes and ``tau_T``
    the total generation budget.  The clock is advanced only by its owning
    run loop.
    """

    n_t: int
    tau_t: int
    tau_T: int
    generation: int = 0

    def __post_init__(self):
        if self.n_t < 1 or self.tau_t < 1 or self.tau_T < 1:
            raise ValueError("n_t, tau_t and tau_T must be positive")
        if self.tau_T % self.tau_t != 0:
            raise ValueError("tau_T must be an integer multiple of tau_t")
        if self.generation < 0:
            raise ValueError("generation must be nonnegative")

    def current_time(self) -> float:
        return (self.generation // self.tau_t) / self.n_t

    def advance(self, generations: int = 1) -> None:
        if generations < 0:
            raise ValueError("cannot advance by a negative amount")
        self.generation += generations

    @property
    def num_environments(self) -> int:
        return self.tau_T // self.tau_t

    def change_times(self) -> list[float]:
        """Distinct time values visited over the full generation budget."""
        return [k / self.n_t for k in range(self.num_environments)]


def _gt(t: float) -> float:
    return math.sin(_HALF_PI * t)


def _gt_abs(t: float) -> float:
    return abs(math.sin(_HALF_PI * t))


def _ht(t: float) -> float:
    return 0.75 * math.sin(_HALF_PI * t) + 1.25


# ---------------------------------------------------------------------------
# WFG transformations used by the *_iso / *_dec variants

def b_flat(y, a, b, c):
    """WFG flat-region bias: maps [b, c] onto the constant a, linear outside.

    Requires 0 < b < c < 1; a is the region's target value.
    """
    y = np.asarray(y, dtype=np.float64)
    low = np.minimum(0.0, np.floor(y - b)) * (a * (b - y) / b)
    high = np.minimum(0.0, np.floor(c - y)) * ((1.0 - a) * (y - c) / (1.0 - c))
    return a + low - high


def s_decept(y, a, b, c):
    """WFG deceptive shift: global minimum 0 at y = a inside a well of
    width 2b, values near 1 elsewhere.

    Requires b < a < 1 - b for the textbook shape; the expression stays
    finite for any a with a != b and a != 1 - b.
    """
    y = np.asarray(y, dtype=np.float64)
    t1 = np.floor(y - a + b) * (1.0 - c + (a - b) / b) / (a - b)
    t2 = np.floor(a + b - y) * (1.0 - c + (1.0 - a - b) / b) / (1.0 - a - b)
    return 1.0 + (np.abs(y - a) - b) * (t1 + t2 + 1.0 / b)


# ---------------------------------------------------------------------------
# reference front helpers

@dataclass
class ReferenceFront:
    """Deterministic sample of the analytic Pareto-optimal front at a time."""

    points: np.ndarray
    time: float
    problem_name: str
    sample_count: int = field(init=False)

    def __post_init__(self):
        self.points = np.asarray(self.points, dtype=np.float64)
        if self.points.ndim != 2 or self.points.shape[0] < 1:
            raise ValueError("a reference front needs at least one point")
        self.sample_count = self.points.shape[0]


def _even_subsample(arr: np.ndarray, n: int) -> np.ndarray:
    if arr.shape[0] < n:
        raise ValueError("cannot subsample more points than available")
    if arr.shape[0] == n:
        return arr
    idx = np.floor(np.linspace(0.0, arr.shape[0] - 1, n)).astype(np.intp)
    return arr[idx]

def _sphere_octant(n: int, radius: float = 1.0) -> np.ndarray:
    # fixed (u, v) angle grid over the first octant of a sphere
    k = max(1, math.isqrt(n - 1) + 1) if n > 1 else 1
    while k * k < n:
        k += 1
    u = np.linspace(0.0, 1.0, k) * _HALF_PI
    v = np.linspace(0.0, 1.0, k) * _HALF_PI
    uu, vv = np.meshgrid(u, v, indexing="ij")
    pts = np.stack(
        [
            np.cos(uu.ravel()) * np.cos(vv.ravel()),
            np.cos(uu.ravel()) * np.sin(vv.ravel()),
            np.sin(uu.ravel()),
        ],
        axis=1,
    )
    return _even_subsample(pts, n) * radius


def _nondominated_curve(f1: np.ndarray, f2: np.ndarray) -> np.ndarray:
    # f1 strictly increasing; keep points whose f2 strictly improves on
    # everything to their left
    keep = np.empty(f1.shape[0], dtype=bool)
    best = math.inf
    for i in range(f1.shape[0]):
        keep[i] = f2[i] < best
        if keep[i]:
            best = f2[i]
    return np.stack([f1[keep], f2[keep]], axis=1)


def _curve_front(n: int, f2_of_f1, oversample: int = 20) -> np.ndarray:
    m = max(n * oversample, 2000)
    f1 = np.linspace(0.0, 1.0, m)
    pts = _nondominated_curve(f1, f2_of_f1(f1))
    return _even_subsample(pts, n)


# ---------------------------------------------------------------------------
# problem base

class Problem:
    """Base class: metadata plus pure, vectorized evaluation."""

    name: str = ""
    decision_dim: int = 0
    objective_count: int = 0
    dmop_type: str = ""

    def __init__(self):
        b = np.asarray(self.bounds(), dtype=np.float64)
        self.lower = b[:, 0].copy()
        self.upper = b[:, 1].copy()

    def bounds(self) -> list[tuple[float, float]]:
        """Per-variable (lower, upper) box bounds."""
        raise NotImplementedError

    def severity_params(self, t: float):
        """(A, B, C) triple of the WFG transformation, if the problem uses one."""
        return None

    def evaluate(self, x, t: float) -> np.ndarray:
        """Objective vector for one decision vector at time t."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] != self.decision_dim:
            raise ValueError(
                f"{self.name} expects a decision vector of length "
                f"{self.decision_dim}, got shape {x.shape}"
            )
        return self._eval(x[None, :], t)[0]

    def evaluate_batch(self, xs, t: float) -> np.ndarray:
        """Objective matrix for a batch of decision vectors at time t."""
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 2 or xs.shape[1] != self.decision_dim:
            raise ValueError(
                f"{self.name} expects decision vectors of length "
                f"{self.decision_dim}, got shape {xs.shape}"
            )
        return self._eval(xs, t)

    def reference_front(self, t: float, n: int) -> ReferenceFront:
        """n points sampled from the analytic front at time t."""
        if n < 1:
            raise ValueError("need at least one reference point")
        return ReferenceFront(self._front(t, n), t, self.name)

    def _eval(self, xs: np.ndarray, t: float) -> np.ndarray:
        raise NotImplementedError

    def _front(self, t: float, n: int) -> np.ndarray:
        raise NotImplementedError


# ---------------------------------------------------------------------------
# FDA family (3 objectives)

class FDA4(Problem):
    """FDA4: spherical three-objective front, optimal tail variables track
    G(t) = |sin(pi t / 2)|.  The front itself is the static unit octant
    f1^2 + f2^2 + f3^2 = 1 (type I)."""

    name = "FDA4"
    decision_dim = 12
    objective_count = 3
    dmop_type = TYPE_I

    def bounds(self):
        return [(0.0, 1.0)] * self.decision_dim

    def _tail(self, xs, t):
        return xs[:, 2:]

    def _g(self, xs, t):
        gt = _gt_abs(t)
        return ((self._tail(xs, t) - gt) ** 2).sum(axis=1)

    def _eval(self, xs, t):
        g = self._g(xs, t)
        a1 = xs[:, 0] * _HALF_PI
        a2 = xs[:, 1] * _HALF_PI
        s = 1.0 + g
        return np.stack(
            [
                s * np.cos(a1) * np.cos(a2),
                s * np.cos(a1) * np.sin(a2),
                s * np.sin(a1),
            ],
            axis=1,
        )

    def _front(self, t, n):
        return _sphere_octant(n)


class FDA5(FDA4):
    """FDA5: like FDA4 but g carries a G(t) offset, so the spherical front
    breathes with radius 1 + G(t); position variables are warped by
    x -> x^F(t), F(t) = 1 + 100 sin^4(pi t / 2) (type II)."""

    name = "FDA5"
    dmop_type = TYPE_II

    def _g(self, xs, t):
        gt = _gt_abs(t)
        return gt + ((self._tail(xs, t) - gt) ** 2).sum(axis=1)

    def _eval(self, xs, t):
        g = self._g(xs, t)
        ft = 1.0 + 100.0 * math.sin(_HALF_PI * t) ** 4
        a1 = xs[:, 0] ** ft * _HALF_PI
        a2 = xs[:, 1] ** ft * _HALF_PI
        s = 1.0 + g
        return np.stack(
            [
                s * np.cos(a1) * np.cos(a2),
                s * np.cos(a1) * np.sin(a2),
                s * np.sin(a1),
            ],
            axis=1,
        )

    def _front(self, t, n):
        return _sphere_octant(n, radius=1.0 + _gt_abs(t))


class FDA5Iso(FDA5):
    """FDA5 with the tail variables passed through the flat-region bias,
    isolating the optimal region."""

    name = "FDA5_iso"

    def severity_params(self, t):
        return (_gt_abs(t), 0.001, 0.05)

    def _tail(self, xs, t):
        a, b, c = self.severity_params(t)
        return b_flat(xs[:, 2:], a, b, c)


class FDA5Dec(FDA5):
    """FDA5 with the tail variables passed through the deceptive shift."""

    name = "FDA5_dec"

    def severity_params(self, t):
        return (_gt_abs(t), 0.001, 0.05)

    def _tail(self, xs, t):
        a, b, c = self.severity_params(t)
        return s_decept(xs[:, 2:], a, b, c)


# ---------------------------------------------------------------------------
# DIMP2

class DIMP2(Problem):
    """DIMP2: every tail variable tracks its own phase-shifted schedule
    G_i(t) = sin(pi t / 2 + 2 pi i / (n + 1))^2 inside a multimodal
    Rastrigin-like g.  The front stays f2 = 1 - sqrt(f1) (type I)."""

    name = "DIMP2"
    decision_dim = 10
    objective_count = 2
    dmop_type = TYPE_I

    def bounds(self):
        return [(0.0, 1.0)] + [(-2.0, 2.0)] * (self.decision_dim - 1)

    def _eval(self, xs, t):
        n = self.decision_dim
        i = np.arange(2, n + 1, dtype=np.float64)
        git = np.sin(_HALF_PI * t + 2.0 * math.pi * (i / (n + 1))) ** 2
        d = xs[:, 1:] - git
        g = 1.0 + 2.0 * (n - 1) + (d ** 2 - 2.0 * np.cos(3.0 * math.pi * d)).sum(axis=1)
        f1 = xs[:, 0]
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.stack([f1, f2], axis=1)

    def _front(self, t, n):
        f1 = np.linspace(0.0, 1.0, n)
        return np.stack([f1, 1.0 - np.sqrt(f1)], axis=1)


# ---------------------------------------------------------------------------
# dMOP family

class DMOP2(Problem):
    """dMOP2: tail variables track G(t) = sin(pi t / 2) while the front
    curvature follows H(t), f2 = 1 - f1^H(t) (type II)."""

    name = "dMOP2"
    decision_dim = 10
    objective_count = 2
    dmop_type = TYPE_II

    def bounds(self):
        return [(0.0, 1.0)] * self.decision_dim

    def _tail(self, xs, t):
        return xs[:, 1:]

    def _eval(self, xs, t):
        gt = _gt(t)
        g = 1.0 + 9.0 * ((self._tail(xs, t) - gt) ** 2).sum(axis=1)
        f1 = xs[:, 0]
        f2 = g * (1.0 - (f1 / g) ** _ht(t))
        return np.stack([f1, f2], axis=1)

    def _front(self, t, n):
        f1 = np.linspace(0.0, 1.0, n)
        return np.stack([f1, 1.0 - f1 ** _ht(t)], axis=1)


class DMOP2Iso(DMOP2):
    """dMOP2 with the tail variables passed through the flat-region bias."""

    name = "dMOP2_iso"

    def severity_params(self, t):
        return (_gt(t), 0.001, 0.05)

    def _tail(self, xs, t):
        a, b, c = self.severity_params(t)
        return b_flat(xs[:, 1:], a, b, c)


class DMOP2Dec(DMOP2):
    """dMOP2 with the tail variables passed through the deceptive shift."""

    name = "dMOP2_dec"

    def severity_params(self, t):
        return (_gt(t), 0.001, 0.05)

    def _tail(self, xs, t):
        a, b, c = self.severity_params(t)
        return s_decept(xs[:, 1:], a, b, c)


class DMOP3(Problem):
    """dMOP3: like dMOP2 with a square-root front, but the variable that
    carries f1 is re-drawn at random on every environment change.  The
    front stays f2 = 1 - sqrt(f1) (type I).

    The draw is owned by the run loop: :meth:`reseed_free_variable`
    derives the index deterministically from a master seed and the
    environment counter, so concurrent runs never share state.
    """

    name = "dMOP3"
    decision_dim = 10
    objective_count = 2
    dmop_type = TYPE_I

    def __init__(self):
        super().__init__()
        self.free_index = 0

    def bounds(self):
        return [(0.0, 1.0)] * self.decision_dim

    def set_free_index(self, idx: int) -> None:
        if not 0 <= idx < self.decision_dim:
            raise ValueError("free variable index out of range")
        self.free_index = int(idx)

    def reseed_free_variable(self, master_seed: int, env_index: int) -> int:
        seq = np.random.SeedSequence([0x0D30_0003, master_seed & 0x7FFF_FFFF, env_index])
        self.free_index = int(seq.generate_state(1)[0] % self.decision_dim)
        return self.free_index

    def _eval(self, xs, t):
        gt = _gt(t)
        others = np.delete(xs, self.free_index, axis=1)
        g = 1.0 + 9.0 * ((others - gt) ** 2).sum(axis=1)
        f1 = xs[:, self.free_index]
        f2 = g * (1.0 - np.sqrt(f1 / g))
        return np.stack([f1, f2], axis=1)

    def _front(self, t, n):
        f1 = np.linspace(0.0, 1.0, n)
        return np.stack([f1, 1.0 - np.sqrt(f1)], axis=1)


# ---------------------------------------------------------------------------
# HE family (static optimal set, moving front: type III)

class HE2(Problem):
    """HE2: ZDT3-like discontinuous front whose curvature follows H(t);
    the optimal set stays at x_i = 0 for the tail variables."""

    name = "HE2"
    decision_dim = 30
    objective_count = 2
    dmop_type = TYPE_III

    def bounds(self):
        return [(0.0, 1.0)] * self.decision_dim

    def _eval(self, xs, t):
        ht = _ht(t)
        g = 1.0 + 9.0 / (self.decision_dim - 1) * xs[:, 1:].sum(axis=1)
        f1 = xs[:, 0]
        r = f1 / g
        f2 = g * (1.0 - np.sqrt(r) ** ht - r ** ht * np.sin(10.0 * math.pi * f1))
        return np.stack([f1, f2], axis=1)

    def _front(self, t, n):
        ht = _ht(t)

        def curve(f1):
            return 1.0 - np.sqrt(f1) ** ht - f1 ** ht * np.sin(10.0 * math.pi * f1)

        return _curve_front(n, curve)


class _HEBase(Problem):
    """Shared machinery for HE7/HE9: objectives built from distances of the
    tail variables to x1-dependent target curves, split over odd and even
    positions; f2 = g * (1 - (f1/g)^H(t))."""

    decision_dim = 10
    objective_count = 2
    dmop_type = TYPE_III

    def bounds(self):
        return [(0.0, 1.0)] + [(-1.0, 1.0)] * (self.decision_dim - 1)

    def _targets(self, x1, j):
        raise NotImplementedError

    def _g_base(self, x1):
        raise NotImplementedError

    def _eval(self, xs, t):
        n = self.decision_dim
        x1 = xs[:, :1]
        j = np.arange(2.0, n + 1.0)
        odd = (j % 2) == 1
        d = (xs[:, 1:] - self._targets(x1, j)) ** 2
        f1 = xs[:, 0] + 2.0 / odd.sum() * d[:, odd].sum(axis=1)
        g = self._g_base(xs[:, 0]) + 2.0 / (~odd).sum() * d[:, ~odd].sum(axis=1)
        f2 = g * (1.0 - (f1 / g) ** _ht(t))
        return np.stack([f1, f2], axis=1)

    def _front(self, t, n):
        ht = _ht(t)
        base = self._g_base

        def curve(f1):
            g = base(f1)
            return g * (1.0 - (f1 / g) ** ht)

        return _curve_front(n, curve)


class HE7(_HEBase):
    """HE7: tail targets ride modulated cosine/sine waves of x1 and the
    front hangs from g = 2 - sqrt(x1)."""

    name = "HE7"

    def _targets(self, x1, j):
        n = self.decision_dim
        amp = 0.3 * x1 ** 2 * np.cos(24.0 * math.pi * x1 + 4.0 * j * math.pi / n) + 0.6 * x1
        odd = (j % 2) == 1
        phase = 6.0 * math.pi * x1 + j * math.pi / n
        return amp * np.where(odd, np.cos(phase), np.sin(phase))

    def _g_base(self, x1):
        return 2.0 - np.sqrt(x1)


class HE9(_HEBase):
    """HE9: tail targets follow sin(6 pi x1 + j pi / n) and the front hangs
    from g = 2 - x1^2."""

    name = "HE9"

    def _targets(self, x1, j):
        n = self.decision_dim
        return np.sin(6.0 * math.pi * x1 + j * math.pi / n)

    def _g_base(self, x1):
        return 2.0 - x1 ** 2


# ---------------------------------------------------------------------------
# registry

_PROBLEM_CLASSES = (
    FDA4,
    FDA5,
    FDA5Iso,
    FDA5Dec,
    DIMP2,
    DMOP2,
    DMOP2Iso,
    DMOP2Dec,
    DMOP3,
    HE2,
    HE7,
    HE9,
)

PROBLEM_NAMES = tuple(cls.name for cls in _PROBLEM_CLASSES)
_BY_LOWER = {cls.name.lower(): cls for cls in _PROBLEM_CLASSES}


def make_problem(name: str) -> Problem:
    """Instantiate a benchmark problem by (case-insensitive) name."""
    cls = _BY_LOWER.get(name.lower())
    if cls is None:
        raise ValueError(
            f"unknown problem {name!r}; available: {', '.join(PROBLEM_NAMES)}"
        )
    return cls()


def problem_index(name: str) -> int:
    """Stable integer id for a problem name (used in seed derivation)."""
    lowered = name.lower()
    for i, cls in enumerate(_PROBLEM_CLASSES):
        if cls.name.lower() == lowered:
            return i
    # unregistered problems (tests, user extensions): stable hash of the name
    import zlib

    return 1000 + zlib.crc32(lowered.encode())
