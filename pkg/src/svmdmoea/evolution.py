"""NSGA-II core: dominance, sorting, crowding, variation and the
generational loop.

The (mu + lambda) scheme: parents are picked by binary tournament on
(rank, crowding distance), recombined with simulated binary crossover and
polynomial mutation, and the combined parent+child pool is truncated front
by front, the last partial front by descending crowding distance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend


@dataclass
class Individual:
    x: np.ndarray
    f: np.ndarray
    rank: int = 0
    crowding: float = 0.0


@dataclass
class Population:
    members: list[Individual]
    capacity: int

    def __post_init__(self):
        if self.capacity < 1:
            raise ValueError("capacity must be positive")
        if len(self.members) > self.capacity:
            raise ValueError("population exceeds its capacity")

    def __len__(self):
        return len(self.members)

    def objectives_matrix(self) -> np.ndarray:
        return np.stack([m.f for m in self.members])

    def decision_matrix(self) -> np.ndarray:
        return np.stack([m.x for m in self.members])


@dataclass
class GAParams:
    """NSGA-II settings.  ``mutation_prob=None`` resolves to 1/n for the
    problem at hand and ``generations_per_env=None`` to tau_t."""

    pop_size: int = 100
    crossover_prob: float = 0.9
    mutation_prob: float | None = None
    eta_c: float = 20.0
    eta_m: float = 20.0
    generations_per_env: int | None = None

    def __post_init__(self):
        if self.pop_size < 2:
            raise ValueError("pop_size must be at least 2")
        if not 0.0 <= self.crossover_prob <= 1.0:
            raise ValueError("crossover_prob must be in [0, 1]")
        if self.mutation_prob is not None and not 0.0 <= self.mutation_prob <= 1.0:
            raise ValueError("mutation_prob must be in [0, 1]")
        if self.eta_c <= 0 or self.eta_m <= 0:
            raise ValueError("distribution indices must be positive")
        if self.generations_per_env is not None and self.generations_per_env < 0:
            raise ValueError("generations_per_env must be nonnegative")


def dominates(a, b) -> bool:
    """Pareto dominance for minimization: a <= b everywhere, < somewhere."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("objective vectors must have equal length")
    return bool((a <= b).all() and (a < b).any())


def _sort_members(members: list[Individual]) -> list[list[int]]:
    objs = np.stack([m.f for m in members])
    ranks, fronts = backend.kernels.nondominated_ranks(objs)
    for i, m in enumerate(members):
        m.rank = int(ranks[i])
    return [list(map(int, f)) for f in fronts]


def fast_nondominated_sort(pop: Population) -> list[list[int]]:
    """Sort a population into fronts; assigns each member's rank.

    Returns the fronts as lists of member indices (rank 0 first).
    """
    return _sort_members(pop.members)


def crowding_distance(front: list[Individual]) -> list[float]:
    """Crowding distances for one front, in input order.

    Boundary members get +inf; interior members accumulate the normalized
    gap between their neighbours per objective.  Objectives with zero
    range contribute nothing.
    """
    n = len(front)
    if n == 0:
        raise ValueError("front must be nonempty")
    objs = np.stack([m.f for m in front])
    d = np.zeros(n)
    for k in range(objs.shape[1]):
        order = np.argsort(objs[:, k], kind="stable")
        vals = objs[order, k]
        d[order[0]] = math.inf
        d[order[-1]] = math.inf
        span = vals[-1] - vals[0]
        if span > 0.0 and n > 2:
            d[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return d.tolist()


def _assign_crowding(members: list[Individual], fronts: list[list[int]]) -> None:
    for front in fronts:
        group = [members[i] for i in front]
        for m, c in zip(group, crowding_distance(group)):
            m.crowding = c


def binary_tournament(pop: Population, rng: np.random.Generator) -> Individual:
    """Pick the better of two uniformly drawn members; rank first, then
    crowding, exact ties by coin flip."""
    i = int(rng.integers(len(pop.members)))
    j = int(rng.integers(len(pop.members)))
    if i == j:
        return pop.members[i]
    a, b = pop.members[i], pop.members[j]
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.crowding != b.crowding:
        return a if a.crowding > b.crowding else b
    return a if rng.random() < 0.5 else b


def sbx_crossover(p1, p2, lower, upper, params: GAParams,
                  rng: np.random.Generator):
    """Simulated binary crossover; children are clamped to the bounds.

    With probability 1 - crossover_prob the parents are copied through.
    Identical parents always yield identical children.
    """
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    if rng.random() >= params.crossover_prob:
        return p1.copy(), p2.copy()
    u = rng.random(p1.shape[0])
    exponent = 1.0 / (params.eta_c + 1.0)
    beta = np.where(u <= 0.5,
                    (2.0 * u) ** exponent,
                    (1.0 / (2.0 * (1.0 - u))) ** exponent)
    mean = 0.5 * (p1 + p2)
    diff = 0.5 * beta * (p1 - p2)
    c1 = np.clip(mean + diff, lower, upper)
    c2 = np.clip(mean - diff, lower, upper)
    return c1, c2


def polynomial_mutation(x, lower, upper, params: GAParams,
                        rng: np.random.Generator):
    """Polynomial mutation, gene-wise with probability ``mutation_prob``
    (1/n when unset); the result is clamped to the bounds."""
    x = np.asarray(x, dtype=np.float64)
    n = x.shape[0]
    pm = params.mutation_prob if params.mutation_prob is not None else 1.0 / n
    gate = rng.random(n)
    u = rng.random(n)
    exponent = 1.0 / (params.eta_m + 1.0)
    delta = np.where(u < 0.5,
                     (2.0 * u) ** exponent - 1.0,
                     1.0 - (2.0 * (1.0 - u)) ** exponent)
    y = np.where(gate < pm, x + delta * (upper - lower), x)
    return np.clip(y, lower, upper)


def _environmental_selection(members: list[Individual],
                             capacity: int) -> list[Individual]:
    fronts = _sort_members(members)
    _assign_crowding(members, fronts)
    selected: list[Individual] = []
    for front in fronts:
        if len(selected) + len(front) <= capacity:
            selected.extend(members[i] for i in front)
            if len(selected) == capacity:
                break
        else:
            crowd = np.array([members[i].crowding for i in front])
            order = np.argsort(-crowd, kind="stable")
            need = capacity - len(selected)
            selected.extend(members[front[k]] for k in order[:need])
            break
    return selected


def nsga2_run(pop0: Population, problem, t: float, params: GAParams,
              rng: np.random.Generator, on_generation=None):
    """Evolve an evaluated population for ``generations_per_env``
    generations at fixed time t.

    Returns ``(final_pop, pos)`` where pos is the rank-0 front of the
    final population.  ``on_generation(gen, pop)`` is invoked after each
    environmental selection.
    """
    if params.generations_per_env is None:
        raise ValueError("generations_per_env must be resolved before nsga2_run")
    n = len(pop0.members)
    pop = Population(list(pop0.members), pop0.capacity)
    fronts = fast_nondominated_sort(pop)
    _assign_crowding(pop.members, fronts)

    for gen in range(params.generations_per_env):
        parents = [binary_tournament(pop, rng) for _ in range(n)]
        child_x = []
        for a in range(0, n - 1, 2):
            c1, c2 = sbx_crossover(parents[a].x, parents[a + 1].x,
                                   problem.lower, problem.upper, params, rng)
            child_x.append(polynomial_mutation(c1, problem.lower, problem.upper,
                                               params, rng))
            child_x.append(polynomial_mutation(c2, problem.lower, problem.upper,
                                               params, rng))
        if len(child_x) < n:  # odd population size: wrap the last parent
            c1, _ = sbx_crossover(parents[-1].x, parents[0].x,
                                  problem.lower, problem.upper, params, rng)
            child_x.append(polynomial_mutation(c1, problem.lower, problem.upper,
                                               params, rng))
        cx = np.stack(child_x)
        cf = problem.evaluate_batch(cx, t)
        children = [Individual(cx[i].copy(), cf[i].copy()) for i in range(n)]

        pop = Population(_environmental_selection(pop.members + children,
                                                  pop0.capacity),
                         pop0.capacity)
        if on_generation is not None:
            on_generation(gen, pop)

    fronts = fast_nondominated_sort(pop)
    _assign_crowding(pop.members, fronts)
    pos = [pop.members[i] for i in fronts[0]]
    return pop, pos
