"""Dynamic multi-objective optimization with classifier-seeded restarts.

The package couples an NSGA-II optimizer with an SVM trained on each
environment's Pareto-optimal set; the trained model filters random
vectors into the next environment's initial population.  Twelve dynamic
benchmark problems, standard baselines and IGD-family metrics round out
an experiment harness driven by plain-text plan files.

Hot kernels (nondominated sorting, distance reductions, SMO) run through
a compiled extension when available and a bit-identical pure-Python
fallback otherwise; see :mod:`svmdmoea.backend`.
"""

from .backend import HAVE_COMPILED, get_backend, set_backend
from .classifier import (DegenerateTrainingSetError, Kernel, SmoParams,
                         SvmModel, TrainingSet, decision_value,
                         decision_values, dual_objective, kkt_violations,
                         load_model, load_model_file, predict,
                         predict_batch, save_model, train)
from .dmoea import (AlgorithmVariant, EnvironmentResult, FilterParams,
                    VARIANT_KINDS, build_training_set, run,
                    seed_population)
from .evolution import (GAParams, Individual, Population,
                        binary_tournament, crowding_distance, dominates,
                        fast_nondominated_sort, nsga2_run,
                        polynomial_mutation, sbx_crossover)
from .harness import (BUILTIN_CONFIGS, EnvironmentConfig, ExperimentPlan,
                      FilterSettings, PlanError, SvmSettings, execute,
                      load_records, parse_plan, serialize_plan, summarize)
from .metrics import MetricRecord, dmigd, igd, migd
from .problems import (PROBLEM_NAMES, Problem, ReferenceFront,
                       TimeController, b_flat, make_problem, s_decept)

__version__ = "0.1.0"

__all__ = [
    "AlgorithmVariant", "BUILTIN_CONFIGS", "DegenerateTrainingSetError",
    "EnvironmentConfig", "EnvironmentResult", "ExperimentPlan",
    "FilterParams", "FilterSettings", "GAParams", "HAVE_COMPILED",
    "Individual", "Kernel", "MetricRecord", "PlanError", "Population",
    "PROBLEM_NAMES", "Problem", "ReferenceFront", "SmoParams",
    "SvmModel", "SvmSettings", "TimeController", "TrainingSet",
    "VARIANT_KINDS", "__version__", "b_flat", "binary_tournament",
    "build_training_set", "crowding_distance", "decision_value",
    "decision_values", "dmigd", "dominates", "dual_objective", "execute",
    "fast_nondominated_sort", "get_backend", "igd", "kkt_violations",
    "load_model", "load_model_file", "load_records", "make_problem",
    "migd", "nsga2_run", "parse_plan", "polynomial_mutation", "predict",
    "predict_batch", "run", "s_decept", "save_model", "sbx_crossover",
    "seed_population", "serialize_plan", "set_backend", "summarize",
    "train",
]
