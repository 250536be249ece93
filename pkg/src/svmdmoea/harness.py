"""Experiment harness: plans, execution, records and summary tables.

A plan is a small INI-like text file declaring the grid (problems x
configs x variants x seeds) plus optional GA/SVM/filter/metric settings.
Execution walks the grid in a canonical order, skips runs whose record
files already exist, optionally fans out across processes, and rewrites a
manifest after every completion.  Records are plain CSV files with a
``#``-prefixed metadata preamble; floats are written with ``repr`` so a
round-trip through the file is exact.
"""

from __future__ import annotations

import concurrent.futures
import os
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .classifier import Kernel, SmoParams
from .dmoea import AlgorithmVariant, FilterParams, run
from .evolution import GAParams
from .metrics import MetricRecord, migd
from .problems import PROBLEM_NAMES, make_problem

CSV_HEADER = "problem,config,variant,seed,env_index,time,igd,evals"

VARIANT_ORDER = ("nsga2", "dnsga2_a", "dnsga2_b", "rnd", "svm_dmoea")


@dataclass(frozen=True)
class EnvironmentConfig:
    """A change-frequency/severity schedule."""

    id: str
    n_t: int
    tau_t: int
    tau_T: int

    def __post_init__(self):
        if not self.id:
            raise ValueError("config id must be nonempty")
        if self.n_t < 1 or self.tau_t < 1 or self.tau_T < 1:
            raise ValueError("config parameters must be positive")
        if self.tau_T % self.tau_t:
            raise ValueError("tau_T must be a multiple of tau_t")

    @property
    def num_environments(self) -> int:
        return self.tau_T // self.tau_t


BUILTIN_CONFIGS = {
    "C1": EnvironmentConfig("C1", 10, 5, 25),
    "C2": EnvironmentConfig("C2", 10, 10, 50),
    "C3": EnvironmentConfig("C3", 10, 25, 125),
    "C4": EnvironmentConfig("C4", 10, 50, 250),
    "C5": EnvironmentConfig("C5", 1, 5, 25),
    "C6": EnvironmentConfig("C6", 1, 10, 50),
    "C7": EnvironmentConfig("C7", 20, 25, 125),
    "C8": EnvironmentConfig("C8", 20, 50, 250),
}

CONFIG_ORDER = tuple(BUILTIN_CONFIGS)


@dataclass
class SvmSettings:
    """Classifier settings as written in a plan file."""

    kernel_kind: str = "rbf"
    gamma: float | None = None
    degree: int = 3
    coef0: float = 1.0
    C: float = 100.0
    tolerance: float = 1e-3
    max_passes: int = 5
    max_iterations: int = 100_000

    def kernel_for(self, decision_dim: int) -> Kernel:
        if self.kernel_kind == "linear":
            return Kernel.linear()
        if self.kernel_kind == "poly":
            return Kernel.polynomial(self.degree, coef0=self.coef0)
        if self.kernel_kind == "rbf":
            # candidates are uniform on the unit cube (variance 1/12 per
            # axis); a narrower default collapses to reject-everything
            gamma = self.gamma if self.gamma is not None \
                else 12.0 / decision_dim
            return Kernel.rbf(gamma=gamma)
        raise ValueError(f"unknown kernel kind {self.kernel_kind!r}")

    def smo_params(self) -> SmoParams:
        return SmoParams(C=self.C, tolerance=self.tolerance,
                         max_passes=self.max_passes,
                         max_iterations=self.max_iterations)


@dataclass
class FilterSettings:
    """Candidate-filter budget as written in a plan file."""

    candidate_multiplier: int = 10
    max_attempts: int = 10
    min_accept: int | None = None

    def resolve(self, pop_size: int) -> FilterParams:
        min_accept = self.min_accept if self.min_accept is not None \
            else max(1, pop_size // 2)
        return FilterParams(
            candidate_count=self.candidate_multiplier * pop_size,
            max_attempts=self.max_attempts, min_accept=min_accept)


class PlanError(ValueError):
    """Raised for malformed plan files."""


@dataclass
class ExperimentPlan:
    problems: tuple[str, ...]
    configs: tuple[EnvironmentConfig, ...]
    variants: tuple[AlgorithmVariant, ...]
    seeds: tuple[int, ...]
    output_dir: str = "results"
    ga: GAParams = field(default_factory=GAParams)
    svm: SvmSettings = field(default_factory=SvmSettings)
    filter: FilterSettings = field(default_factory=FilterSettings)
    reference_points: int = 1000


def _parse_config_token(token: str, lineno: int) -> EnvironmentConfig:
    upper = token.upper()
    if upper in BUILTIN_CONFIGS:
        return BUILTIN_CONFIGS[upper]
    parts = token.split(":")
    if len(parts) == 4 and parts[0].lower() == "custom":
        try:
            n_t, tau_t, tau_T = (int(p) for p in parts[1:])
            return EnvironmentConfig(f"custom:{n_t}:{tau_t}:{tau_T}",
                                     n_t, tau_t, tau_T)
        except ValueError as exc:
            raise PlanError(f"line {lineno}: bad custom config "
                            f"{token!r}: {exc}") from exc
    raise PlanError(f"line {lineno}: unknown config {token!r}; use "
                    f"{', '.join(CONFIG_ORDER)} or custom:<nt>:<taut>:<tauT>")


def _split_tokens(value: str) -> list[str]:
    return [tok for tok in value.replace(",", " ").split() if tok]


_INT_KEYS_GA = {"pop_size", "generations_per_env"}
_FLOAT_KEYS_GA = {"crossover_prob", "mutation_prob", "eta_c", "eta_m"}


def parse_plan(text: str) -> ExperimentPlan:
    """Parse a plan document; raises :class:`PlanError` with the offending
    line number on any unknown section, key or value."""
    problems: list[str] = []
    configs: list[EnvironmentConfig] = []
    variants: list[AlgorithmVariant] = []
    seeds: list[int] = []
    output_dir = "results"
    ga_kwargs: dict = {}
    svm = SvmSettings()
    filt = FilterSettings()
    reference_points = 1000

    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in ("experiment", "ga", "svm", "filter",
                               "metrics"):
                raise PlanError(f"line {lineno}: unknown section "
                                f"[{section}]")
            continue
        if section is None:
            raise PlanError(f"line {lineno}: content before any section")
        if "=" not in line:
            raise PlanError(f"line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if not value:
            raise PlanError(f"line {lineno}: empty value for {key!r}")

        try:
            if section == "experiment":
                if key == "problems":
                    for tok in _split_tokens(value):
                        problems.append(make_problem(tok).name)
                elif key == "configs":
                    for tok in _split_tokens(value):
                        configs.append(_parse_config_token(tok, lineno))
                elif key == "variants":
                    for tok in _split_tokens(value):
                        variants.append(AlgorithmVariant.parse(tok))
                elif key == "seeds":
                    seeds.extend(int(tok) for tok in _split_tokens(value))
                elif key == "output_dir":
                    output_dir = value
                else:
                    raise PlanError(f"line {lineno}: unknown key {key!r} "
                                    "in [experiment]")
            elif section == "ga":
                if key in _INT_KEYS_GA:
                    ga_kwargs[key] = int(value)
                elif key in _FLOAT_KEYS_GA:
                    ga_kwargs[key] = float(value)
                else:
                    raise PlanError(f"line {lineno}: unknown key {key!r} "
                                    "in [ga]")
            elif section == "svm":
                if key == "kernel":
                    if value.lower() not in ("linear", "poly", "rbf"):
                        raise PlanError(f"line {lineno}: unknown kernel "
                                        f"{value!r}")
                    svm.kernel_kind = value.lower()
                elif key == "gamma":
                    svm.gamma = float(value)
                elif key == "degree":
                    svm.degree = int(value)
                elif key == "coef0":
                    svm.coef0 = float(value)
                elif key == "c":
                    svm.C = float(value)
                elif key == "tolerance":
                    svm.tolerance = float(value)
                elif key == "max_passes":
                    svm.max_passes = int(value)
                elif key == "max_iterations":
                    svm.max_iterations = int(value)
                else:
                    raise PlanError(f"line {lineno}: unknown key {key!r} "
                                    "in [svm]")
            elif section == "filter":
                if key == "candidate_multiplier":
                    filt.candidate_multiplier = int(value)
                elif key == "max_attempts":
                    filt.max_attempts = int(value)
                elif key == "min_accept":
                    filt.min_accept = int(value)
                else:
                    raise PlanError(f"line {lineno}: unknown key {key!r} "
                                    "in [filter]")
            elif section == "metrics":
                if key == "reference_points":
                    reference_points = int(value)
                    if reference_points < 500:
                        raise PlanError(f"line {lineno}: reference_points "
                                        "must be at least 500")
                else:
                    raise PlanError(f"line {lineno}: unknown key {key!r} "
                                    "in [metrics]")
        except PlanError:
            raise
        except ValueError as exc:
            raise PlanError(f"line {lineno}: bad value for {key!r}: "
                            f"{exc}") from exc

    if not problems:
        raise PlanError("plan declares no problems")
    if not configs:
        raise PlanError("plan declares no configs")
    if not variants:
        raise PlanError("plan declares no variants")
    if not seeds:
        raise PlanError("plan declares no seeds")
    if len(set(seeds)) != len(seeds):
        raise PlanError("plan declares duplicate seeds")
    if len({p for p in problems}) != len(problems):
        raise PlanError("plan declares duplicate problems")
    if len({c.id for c in configs}) != len(configs):
        raise PlanError("plan declares duplicate configs")
    if len({v.kind for v in variants}) != len(variants):
        raise PlanError("plan declares duplicate variants")

    try:
        ga = GAParams(**ga_kwargs)
    except ValueError as exc:
        raise PlanError(f"bad [ga] settings: {exc}") from exc

    return ExperimentPlan(
        problems=tuple(problems), configs=tuple(configs),
        variants=tuple(variants), seeds=tuple(seeds),
        output_dir=output_dir, ga=ga, svm=svm, filter=filt,
        reference_points=reference_points)


# plan files double as run configuration; both names are in use
parse_config = parse_plan


def serialize_plan(plan: ExperimentPlan) -> str:
    """Canonical text form; ``parse_plan(serialize_plan(p))`` reproduces
    the plan."""
    lines = ["[experiment]"]
    lines.append("problems = " + " ".join(plan.problems))
    lines.append("configs = " + " ".join(c.id for c in plan.configs))
    lines.append("variants = " + " ".join(v.kind for v in plan.variants))
    lines.append("seeds = " + " ".join(str(s) for s in plan.seeds))
    lines.append("output_dir = " + plan.output_dir)
    lines.append("")
    lines.append("[ga]")
    lines.append(f"pop_size = {plan.ga.pop_size}")
    lines.append(f"crossover_prob = {plan.ga.crossover_prob!r}")
    if plan.ga.mutation_prob is not None:
        lines.append(f"mutation_prob = {plan.ga.mutation_prob!r}")
    lines.append(f"eta_c = {plan.ga.eta_c!r}")
    lines.append(f"eta_m = {plan.ga.eta_m!r}")
    if plan.ga.generations_per_env is not None:
        lines.append(f"generations_per_env = {plan.ga.generations_per_env}")
    lines.append("")
    lines.append("[svm]")
    lines.append(f"kernel = {plan.svm.kernel_kind}")
    if plan.svm.gamma is not None:
        lines.append(f"gamma = {plan.svm.gamma!r}")
    if plan.svm.kernel_kind == "poly":
        lines.append(f"degree = {plan.svm.degree}")
        lines.append(f"coef0 = {plan.svm.coef0!r}")
    lines.append(f"c = {plan.svm.C!r}")
    lines.append(f"tolerance = {plan.svm.tolerance!r}")
    lines.append(f"max_passes = {plan.svm.max_passes}")
    lines.append(f"max_iterations = {plan.svm.max_iterations}")
    lines.append("")
    lines.append("[filter]")
    lines.append(f"candidate_multiplier = {plan.filter.candidate_multiplier}")
    lines.append(f"max_attempts = {plan.filter.max_attempts}")
    if plan.filter.min_accept is not None:
        lines.append(f"min_accept = {plan.filter.min_accept}")
    lines.append("")
    lines.append("[metrics]")
    lines.append(f"reference_points = {plan.reference_points}")
    lines.append("")
    return "\n".join(lines)


def _record_name(problem: str, config_id: str, variant: str,
                 seed: int) -> str:
    safe_config = config_id.replace(":", "-")
    return f"{problem}__{safe_config}__{variant}__s{seed}.csv"


def _grid(plan: ExperimentPlan):
    for problem in plan.problems:
        for config in plan.configs:
            for variant in plan.variants:
                for seed in plan.seeds:
                    yield problem, config, variant, seed


def _run_one(problem_name: str, config: EnvironmentConfig,
             variant: AlgorithmVariant, seed: int,
             plan: ExperimentPlan) -> MetricRecord:
    problem = make_problem(problem_name)
    results = run(
        variant, problem, config, ga=plan.ga,
        fp=plan.filter.resolve(plan.ga.pop_size),
        kernel=plan.svm.kernel_for(problem.decision_dim),
        smo=plan.svm.smo_params(), seed=seed,
        reference_points=plan.reference_points)
    series = [(r.time, r.igd) for r in results]
    record = MetricRecord(
        problem_name=problem_name, config_id=config.id,
        variant=variant.kind, seed=seed, igd_series=series,
        migd=migd(series),
        evaluations_used=sum(r.optimizer_evals for r in results),
        env_evals=[r.optimizer_evals for r in results],
        seeding_evals=[r.seeding_evals for r in results],
        seed_modes=[r.seed_mode for r in results],
        seed_accepted=[r.seed_accepted for r in results],
        seed_filled=[r.seed_filled for r in results],
        first_igd=[r.first_igd for r in results],
        backend_name=backend.get_backend(),
    )
    record.validate()
    return record


def _render_record(record: MetricRecord, config: EnvironmentConfig,
                   plan: ExperimentPlan) -> str:
    gens = plan.ga.generations_per_env if plan.ga.generations_per_env \
        is not None else config.tau_t
    lines = [
        "# schema: svmdmoea-record 1",
        f"# problem: {record.problem_name}",
        f"# config: {record.config_id}",
        f"# variant: {record.variant}",
        f"# seed: {record.seed}",
        f"# n_t: {config.n_t}",
        f"# tau_t: {config.tau_t}",
        f"# tau_T: {config.tau_T}",
        f"# pop_size: {plan.ga.pop_size}",
        f"# generations_per_env: {gens}",
        f"# reference_points: {plan.reference_points}",
        f"# backend: {record.backend_name}",
        f"# migd: {record.migd!r}",
        "# seed_modes: " + " ".join(record.seed_modes),
        "# seed_accepted: " + " ".join(str(v) for v in record.seed_accepted),
        "# seed_filled: " + " ".join(str(v) for v in record.seed_filled),
        "# seeding_evals: " + " ".join(str(v) for v in record.seeding_evals),
        "# first_igd: " + " ".join(repr(v) for v in record.first_igd),
        CSV_HEADER,
    ]
    for env_index, (time, value) in enumerate(record.igd_series):
        lines.append(
            f"{record.problem_name},{record.config_id},{record.variant},"
            f"{record.seed},{env_index},{time!r},{value!r},"
            f"{record.env_evals[env_index]}")
    return "\n".join(lines) + "\n"


def _parse_record(text: str, path: str = "<record>") -> MetricRecord:
    meta: dict[str, str] = {}
    rows: list[str] = []
    header_seen = False
    for raw in text.splitlines():
        if raw.startswith("#"):
            body = raw[1:].strip()
            if ":" in body:
                key, _, val = body.partition(":")
                meta[key.strip()] = val.strip()
            continue
        if not raw.strip():
            continue
        if not header_seen:
            if raw != CSV_HEADER:
                raise ValueError(f"{path}: bad CSV header {raw!r}")
            header_seen = True
            continue
        rows.append(raw)
    if not header_seen or not rows:
        raise ValueError(f"{path}: no data rows")

    series = []
    env_evals = []
    problem = config_id = variant = None
    seed = None
    for raw in rows:
        parts = raw.split(",")
        if len(parts) != 8:
            raise ValueError(f"{path}: malformed row {raw!r}")
        problem, config_id, variant = parts[0], parts[1], parts[2]
        seed = int(parts[3])
        series.append((float(parts[5]), float(parts[6])))
        env_evals.append(int(parts[7]))

    def _meta_list(key: str, conv, default):
        if key not in meta:
            return default
        return [conv(tok) for tok in meta[key].split()]

    record = MetricRecord(
        problem_name=problem, config_id=config_id, variant=variant,
        seed=seed, igd_series=series, migd=float(meta["migd"]),
        evaluations_used=sum(env_evals), env_evals=env_evals,
        seeding_evals=_meta_list("seeding_evals", int, [0] * len(series)),
        seed_modes=_meta_list("seed_modes", str, ["?"] * len(series)),
        seed_accepted=_meta_list("seed_accepted", int, [0] * len(series)),
        seed_filled=_meta_list("seed_filled", int, [0] * len(series)),
        first_igd=_meta_list("first_igd", float,
                             [float("nan")] * len(series)),
        backend_name=meta.get("backend", ""),
    )
    record.validate()
    return record


def load_records(directory: str) -> list[MetricRecord]:
    """Read every ``*.csv`` record under ``directory`` (non-recursive)."""
    records = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(".csv"):
            continue
        path = os.path.join(directory, name)
        with open(path, encoding="utf-8") as fh:
            records.append(_parse_record(fh.read(), path))
    return records


def _write_atomic(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_manifest(out_dir: str, plan: ExperimentPlan,
                    done: dict[tuple, str]) -> None:
    lines = ["# svmdmoea manifest 1"]
    for key in _grid(plan):
        problem, config, variant, seed = key
        ident = (problem, config.id, variant.kind, seed)
        status = done.get(ident, "pending")
        lines.append(f"{problem},{config.id},{variant.kind},{seed},{status}")
    _write_atomic(os.path.join(out_dir, "manifest.txt"),
                  "\n".join(lines) + "\n")


def _worker(args):
    problem, config, variant, seed, plan = args
    record = _run_one(problem, config, variant, seed, plan)
    return record, _render_record(record, config, plan)


def execute(plan: ExperimentPlan, jobs: int = 1,
            out_dir: str | None = None):
    """Run the plan's grid, skipping completed runs.

    Returns ``(records, failures)`` where ``records`` covers every cell
    that now has a valid record file and ``failures`` counts cells that
    raised.  Failed cells leave a ``.failed`` marker beside where the
    record would go.
    """
    out = out_dir if out_dir is not None else plan.output_dir
    os.makedirs(out, exist_ok=True)

    pending = []
    done: dict[tuple, str] = {}
    records: list[MetricRecord] = []
    for problem, config, variant, seed in _grid(plan):
        name = _record_name(problem, config.id, variant.kind, seed)
        path = os.path.join(out, name)
        ident = (problem, config.id, variant.kind, seed)
        if os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    records.append(_parse_record(fh.read(), path))
                done[ident] = "done"
                continue
            except (ValueError, KeyError):
                os.remove(path)
        pending.append((problem, config, variant, seed, path, ident))

    _write_manifest(out, plan, done)
    failures = 0

    def _finish(item, outcome) -> None:
        nonlocal failures
        _, config, _, _, path, ident = item
        if isinstance(outcome, BaseException):
            failures += 1
            done[ident] = "failed"
            _write_atomic(path.replace(".csv", ".failed"),
                          f"{type(outcome).__name__}: {outcome}\n")
        else:
            record, text = outcome
            _write_atomic(path, text)
            records.append(record)
            done[ident] = "done"
        _write_manifest(out, plan, done)

    if jobs <= 1 or len(pending) <= 1:
        for item in pending:
            problem, config, variant, seed, path, ident = item
            try:
                outcome = _worker((problem, config, variant, seed, plan))
            except Exception as exc:  # noqa: BLE001 - isolate cell failures
                outcome = exc
            _finish(item, outcome)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = {
                ex.submit(_worker, (item[0], item[1], item[2], item[3],
                                    plan)): item
                for item in pending
            }
            for fut in concurrent.futures.as_completed(futures):
                item = futures[fut]
                try:
                    outcome = fut.result()
                except Exception as exc:  # noqa: BLE001
                    outcome = exc
                _finish(item, outcome)

    return records, failures


def _variant_columns(records: list[MetricRecord]) -> list[str]:
    present = {r.variant for r in records}
    ordered = [v for v in VARIANT_ORDER if v in present]
    ordered.extend(sorted(present - set(VARIANT_ORDER)))
    return ordered


def _problem_rows(records: list[MetricRecord]) -> list[str]:
    present = {r.problem_name for r in records}
    ordered = [p for p in PROBLEM_NAMES if p in present]
    ordered.extend(sorted(present - set(PROBLEM_NAMES)))
    return ordered


def _config_columns(records: list[MetricRecord]) -> list[str]:
    present = {r.config_id for r in records}
    ordered = [c for c in CONFIG_ORDER if c in present]
    ordered.extend(sorted(present - set(CONFIG_ORDER)))
    return ordered


def _dmigd_table(records: list[MetricRecord]):
    """Per problem and variant: mean and median across seeds of the
    per-seed DMIGD (mean MIGD over that seed's covered configs)."""
    by_cell: dict[tuple[str, str], dict[int, list[float]]] = {}
    for r in records:
        cell = by_cell.setdefault((r.problem_name, r.variant), {})
        cell.setdefault(r.seed, []).append(r.migd)
    table: dict[tuple[str, str], tuple[float, float]] = {}
    for key, by_seed in by_cell.items():
        per_seed = sorted(float(np.mean(vals)) for vals in by_seed.values())
        arr = np.array(per_seed)
        table[key] = (float(arr.mean()), float(np.median(arr)))
    return table


def _migd_detail(records: list[MetricRecord]):
    by_cell: dict[tuple[str, str, str], list[float]] = {}
    for r in records:
        by_cell.setdefault((r.variant, r.problem_name, r.config_id),
                           []).append(r.migd)
    return {key: float(np.mean(sorted(vals)))
            for key, vals in by_cell.items()}


def summarize(records: list[MetricRecord], fmt: str = "md") -> str:
    """Aggregate records into DMIGD and MIGD tables.

    Output depends only on the set of records, not their order.  ``md``
    renders markdown with the per-row best DMIGD in bold; ``csv`` emits
    the same tables with an explicit ``best`` column.
    """
    if fmt not in ("md", "csv"):
        raise ValueError(f"unknown summary format {fmt!r}")
    if not records:
        return "no records\n"

    variants = _variant_columns(records)
    problems = _problem_rows(records)
    configs = _config_columns(records)
    dmigd_table = _dmigd_table(records)
    detail = _migd_detail(records)

    out: list[str] = []

    def _fmt(v: float) -> str:
        return f"{v:.6f}"

    if fmt == "md":
        out.append("## DMIGD by problem (mean / median across seeds)")
        out.append("")
        out.append("| problem | " + " | ".join(variants) + " |")
        out.append("|---" * (len(variants) + 1) + "|")
        for problem in problems:
            means = {v: dmigd_table.get((problem, v)) for v in variants}
            available = {v: m for v, m in means.items() if m is not None}
            best = min(available, key=lambda v: available[v][0]) \
                if available else None
            cells = []
            for v in variants:
                m = means[v]
                if m is None:
                    cells.append("-")
                    continue
                text = f"{_fmt(m[0])} / {_fmt(m[1])}"
                cells.append(f"**{text}**" if v == best else text)
            out.append(f"| {problem} | " + " | ".join(cells) + " |")
        out.append("")
        for variant in variants:
            out.append(f"## MIGD detail: {variant}")
            out.append("")
            out.append("| problem | " + " | ".join(configs) + " |")
            out.append("|---" * (len(configs) + 1) + "|")
            for problem in problems:
                cells = []
                for config in configs:
                    val = detail.get((variant, problem, config))
                    cells.append("-" if val is None else _fmt(val))
                out.append(f"| {problem} | " + " | ".join(cells) + " |")
            out.append("")
    else:
        out.append("table,problem," + ",".join(variants) + ",best")
        for problem in problems:
            means = {v: dmigd_table.get((problem, v)) for v in variants}
            available = {v: m for v, m in means.items() if m is not None}
            best = min(available, key=lambda v: available[v][0]) \
                if available else ""
            cells = [("" if means[v] is None else _fmt(means[v][0]))
                     for v in variants]
            out.append(f"dmigd_mean,{problem},{','.join(cells)},{best}")
        for variant in variants:
            out.append(f"table,problem," + ",".join(configs) + ",variant")
            for problem in problems:
                cells = [("" if detail.get((variant, problem, c)) is None
                          else _fmt(detail[(variant, problem, c)]))
                         for c in configs]
                out.append(f"migd,{problem},{','.join(cells)},{variant}")
    return "\n".join(out) + "\n"
