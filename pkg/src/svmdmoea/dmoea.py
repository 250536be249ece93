"""Dynamic optimization loop: SVM-seeded restarts and baselines.

After each environment change the previous environment's Pareto-optimal
set (positives) and dominated members (negatives, topped up with random
dominated vectors) train a classifier; random candidates that the
classifier accepts seed the next initial population.  Baselines cover the
usual restart strategies:

    nsga2      carry the final population forward unchanged
    dnsga2_a   carry forward, replace a fraction with random vectors
    dnsga2_b   carry forward, replace a fraction with mutated survivors
    rnd        restart from scratch with random vectors
    svm_dmoea  classifier-filtered random seeding

Every variant consumes the same optimizer evaluation budget per
environment: pop_size initial evaluations plus pop_size per generation.
Evaluations spent mining training negatives are counted separately.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .classifier import (DegenerateTrainingSetError, Kernel, SmoParams,
                         SvmModel, TrainingSet, decision_values, train)
from .evolution import (GAParams, Individual, Population, nsga2_run,
                        polynomial_mutation)
from .metrics import igd
from .problems import DMOP3, Problem, problem_index

VARIANT_KINDS = ("nsga2", "dnsga2_a", "dnsga2_b", "rnd", "svm_dmoea")

_VARIANT_ALIASES = {
    "nsga2": "nsga2",
    "nsga-ii": "nsga2",
    "plain_nsga2": "nsga2",
    "dnsga2_a": "dnsga2_a",
    "dnsga2a": "dnsga2_a",
    "dnsga-ii-a": "dnsga2_a",
    "dnsga2_b": "dnsga2_b",
    "dnsga2b": "dnsga2_b",
    "dnsga-ii-b": "dnsga2_b",
    "rnd": "rnd",
    "random": "rnd",
    "svm_dmoea": "svm_dmoea",
    "svm-dmoea": "svm_dmoea",
    "svmdmoea": "svm_dmoea",
}

_RUN_TAG = 0x0D0E_A001


@dataclass(frozen=True)
class AlgorithmVariant:
    """A restart strategy; ``replace_fraction`` only matters for the
    dnsga2 variants."""

    kind: str
    replace_fraction: float = 0.2

    def __post_init__(self):
        if self.kind not in VARIANT_KINDS:
            raise ValueError(f"unknown variant {self.kind!r}")
        if not 0.0 < self.replace_fraction < 1.0:
            raise ValueError("replace_fraction must be in (0, 1)")

    @classmethod
    def parse(cls, token: str) -> "AlgorithmVariant":
        kind = _VARIANT_ALIASES.get(token.strip().lower())
        if kind is None:
            raise ValueError(f"unknown variant {token!r}; "
                             f"available: {', '.join(VARIANT_KINDS)}")
        return cls(kind)

    @property
    def label(self) -> str:
        return self.kind


@dataclass
class FilterParams:
    """Candidate filtering budget for the classifier-seeded restart."""

    candidate_count: int = 1000
    max_attempts: int = 10
    min_accept: int = 50

    def __post_init__(self):
        if self.candidate_count < 1 or self.max_attempts < 1:
            raise ValueError("filter budgets must be positive")
        if self.min_accept < 1:
            raise ValueError("min_accept must be positive")

    def validate_for(self, pop_size: int) -> None:
        if not (self.min_accept <= pop_size
                <= self.candidate_count * self.max_attempts):
            raise ValueError(
                "filter parameters must satisfy "
                "min_accept <= pop_size <= candidate_count * max_attempts"
            )


@dataclass
class EnvironmentResult:
    """Outcome of one environment: the front found, its IGD, and how the
    initial population was produced."""

    time: float
    pos: list[Individual]
    final_pop: Population
    igd: float
    env_index: int = 0
    optimizer_evals: int = 0
    seeding_evals: int = 0
    seed_mode: str = "random"
    seed_accepted: int = 0
    seed_filled: int = 0
    first_igd: float = math.nan


def _normalize(xs: np.ndarray, problem: Problem) -> np.ndarray:
    return (xs - problem.lower) / (problem.upper - problem.lower)


def build_training_set(result: EnvironmentResult, problem: Problem,
                       fp: FilterParams, rng: np.random.Generator):
    """Labeled data from an environment's outcome.

    Positives are the Pareto-optimal members; negatives the dominated
    members of the final population, topped up with uniform-random vectors
    that are dominated by some positive (evaluated at the result's time)
    until the classes balance.  Returns ``(training_set, evals_used)``.

    Raises :class:`DegenerateTrainingSetError` when no negative can be
    found within the sampling budget.
    """
    pos_members = result.pos
    pos_x = np.stack([m.x for m in pos_members])
    pos_f = np.stack([m.f for m in pos_members])
    pos_feat = _normalize(pos_x, problem)
    pos_keys = {row.tobytes() for row in pos_feat}

    neg_rows = []
    for m in result.final_pop.members:
        if m.rank > 0:
            feat = _normalize(m.x, problem)
            if feat.tobytes() not in pos_keys:
                neg_rows.append(feat)

    evals = 0
    budget = fp.max_attempts * fp.candidate_count
    while len(neg_rows) < len(pos_members) and budget > 0:
        batch = min(fp.candidate_count, budget)
        budget -= batch
        xs = rng.uniform(problem.lower, problem.upper,
                         (batch, problem.decision_dim))
        fs = problem.evaluate_batch(xs, result.time)
        evals += batch
        le = (pos_f[:, None, :] <= fs[None, :, :]).all(axis=2)
        lt = (pos_f[:, None, :] < fs[None, :, :]).any(axis=2)
        dominated = (le & lt).any(axis=0)
        for row in _normalize(xs[dominated], problem):
            if len(neg_rows) >= len(pos_members):
                break
            if row.tobytes() not in pos_keys:
                neg_rows.append(row)

    if not neg_rows:
        raise DegenerateTrainingSetError(
            "degenerate training set: no dominated vectors found "
            f"within {fp.max_attempts * fp.candidate_count} samples"
        )

    samples = np.vstack([pos_feat, np.stack(neg_rows)])
    labels = np.concatenate([np.ones(len(pos_members)),
                             -np.ones(len(neg_rows))])
    return TrainingSet(np.clip(samples, 0.0, 1.0), labels), evals


def seed_population(model: SvmModel, problem: Problem, t_next: float,
                    fp: FilterParams, pop_size: int,
                    rng: np.random.Generator):
    """Classifier-filtered initial population for the next environment.

    Draws up to ``max_attempts`` batches of ``candidate_count`` random
    vectors, keeps those the model accepts, and fills any shortfall with
    unfiltered random vectors.  Returns ``(population, accepted, filled)``
    with exactly ``pop_size`` members evaluated at ``t_next``.
    """
    taken: list[np.ndarray] = []
    for _ in range(fp.max_attempts):
        if len(taken) >= pop_size:
            break
        xs = rng.uniform(problem.lower, problem.upper,
                         (fp.candidate_count, problem.decision_dim))
        accepted = xs[decision_values(model, _normalize(xs, problem)) >= 0.0]
        for row in accepted:
            if len(taken) >= pop_size:
                break
            taken.append(row)
    accepted_count = len(taken)
    filled = pop_size - accepted_count
    if filled > 0:
        taken.extend(rng.uniform(problem.lower, problem.upper,
                                 (filled, problem.decision_dim)))
    xs = np.stack(taken)
    fs = problem.evaluate_batch(xs, t_next)
    members = [Individual(xs[i].copy(), fs[i].copy())
               for i in range(pop_size)]
    return Population(members, pop_size), accepted_count, filled


def _evaluate_population(problem: Problem, xs: np.ndarray,
                         t: float, capacity: int) -> Population:
    fs = problem.evaluate_batch(xs, t)
    members = [Individual(xs[i].copy(), fs[i].copy())
               for i in range(xs.shape[0])]
    return Population(members, capacity)


def _rank0_objectives(pop: Population) -> np.ndarray:
    from .evolution import fast_nondominated_sort

    fronts = fast_nondominated_sort(pop)
    return np.stack([pop.members[i].f for i in fronts[0]])


def run(variant: AlgorithmVariant, problem: Problem, config, ga: GAParams | None = None,
        fp: FilterParams | None = None, kernel: Kernel | None = None,
        smo: SmoParams | None = None, seed: int = 0,
        reference_points: int = 1000) -> list[EnvironmentResult]:
    """Execute one run: every environment of ``config`` in sequence.

    Deterministic given ``seed``; the random stream is derived from the
    seed, the problem and the configuration (not the variant), so all
    variants share identical first-environment results under the same
    seed.
    """
    ga = ga if ga is not None else GAParams()
    n = ga.pop_size
    gens = ga.generations_per_env if ga.generations_per_env is not None \
        else config.tau_t
    ga_run = replace(ga, generations_per_env=gens,
                     mutation_prob=ga.mutation_prob
                     if ga.mutation_prob is not None
                     else 1.0 / problem.decision_dim)
    if fp is None:
        fp = FilterParams(candidate_count=10 * n, max_attempts=10,
                          min_accept=max(1, n // 2))
    fp.validate_for(n)
    # bandwidth matched to the uniform candidate cloud on [0,1]^d
    # (per-axis variance 1/12); the hinge cost must be stiff enough that
    # the few Pareto-optimal positives are not sacrificed wholesale
    kernel = kernel if kernel is not None \
        else Kernel.rbf(gamma=12.0 / problem.decision_dim)
    smo = smo if smo is not None else SmoParams(C=100.0)

    pidx = problem_index(problem.name)
    seq_material = [_RUN_TAG, seed, pidx, config.n_t, config.tau_t,
                    config.tau_T]
    rng = np.random.default_rng(np.random.SeedSequence(seq_material))
    dmop3_master = (seed * 1_000_003 + pidx * 97 + config.n_t * 31
                    + config.tau_t * 7 + config.tau_T)

    n_env = config.tau_T // config.tau_t
    optimizer_evals = n * (1 + gens)
    results: list[EnvironmentResult] = []
    prev: EnvironmentResult | None = None

    for k in range(n_env):
        t = k / config.n_t
        if isinstance(problem, DMOP3):
            problem.reseed_free_variable(dmop3_master, k)

        seed_mode = "random"
        seeding_evals = 0
        accepted = 0
        filled = 0
        pop0: Population | None = None

        if k == 0 or variant.kind == "rnd":
            xs = rng.uniform(problem.lower, problem.upper,
                             (n, problem.decision_dim))
        elif variant.kind == "nsga2":
            xs = prev.final_pop.decision_matrix().copy()
            seed_mode = "carry"
        elif variant.kind == "dnsga2_a":
            xs = prev.final_pop.decision_matrix().copy()
            count = int(round(variant.replace_fraction * n))
            slots = rng.choice(n, size=count, replace=False)
            xs[slots] = rng.uniform(problem.lower, problem.upper,
                                    (count, problem.decision_dim))
            seed_mode = "carry+random"
        elif variant.kind == "dnsga2_b":
            carried = prev.final_pop.decision_matrix()
            xs = carried.copy()
            count = int(round(variant.replace_fraction * n))
            slots = rng.choice(n, size=count, replace=False)
            for slot in slots:
                source = carried[int(rng.integers(n))]
                xs[slot] = polynomial_mutation(source, problem.lower,
                                               problem.upper, ga_run, rng)
            seed_mode = "carry+mutation"
        else:  # svm_dmoea
            try:
                training, seeding_evals = build_training_set(prev, problem,
                                                             fp, rng)
                model = train(training, kernel, smo, rng)
                pop0, accepted, filled = seed_population(model, problem, t,
                                                         fp, n, rng)
                seed_mode = "svm"
            except DegenerateTrainingSetError:
                xs = rng.uniform(problem.lower, problem.upper,
                                 (n, problem.decision_dim))
                seed_mode = "degenerate_rnd"
                seeding_evals = 0

        if pop0 is None:
            pop0 = _evaluate_population(problem, xs, t, n)

        ref = problem.reference_front(t, reference_points)
        first = igd(ref, _rank0_objectives(pop0))
        final_pop, pos = nsga2_run(pop0, problem, t, ga_run, rng)
        value = igd(ref, np.stack([m.f for m in pos]))

        prev = EnvironmentResult(
            time=t, pos=pos, final_pop=final_pop, igd=value, env_index=k,
            optimizer_evals=optimizer_evals, seeding_evals=seeding_evals,
            seed_mode=seed_mode, seed_accepted=accepted, seed_filled=filled,
            first_igd=first,
        )
        results.append(prev)
    return results
