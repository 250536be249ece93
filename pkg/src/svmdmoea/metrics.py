"""Front-quality metrics: IGD and its averages over time and configurations.

IGD averages, over a reference front sampled from the true Pareto front,
the Euclidean distance to the nearest point of the approximation; MIGD
averages IGD over the environment changes of one run, and DMIGD averages
MIGD over environment configurations.  Lower is better everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import backend
from .problems import ReferenceFront


def igd(reference: ReferenceFront | np.ndarray, approximation) -> float:
    """Mean distance from each reference point to its nearest neighbour in
    the approximation set.  Zero iff every reference point is matched."""
    ref_pts = reference.points if isinstance(reference, ReferenceFront) \
        else np.asarray(reference, dtype=np.float64)
    approx = np.asarray(approximation, dtype=np.float64)
    if approx.size == 0:
        raise ValueError("empty approximation")
    approx = np.atleast_2d(approx)
    if approx.shape[1] != ref_pts.shape[1]:
        raise ValueError(
            f"objective count mismatch: reference has {ref_pts.shape[1]}, "
            f"approximation has {approx.shape[1]}"
        )
    d2 = backend.kernels.min_sq_dists(ref_pts, approx)
    return float(np.mean(np.sqrt(d2)))


def migd(series: list[tuple[float, float]]) -> float:
    """Mean IGD over the (time, igd) series of one run."""
    if not series:
        raise ValueError("migd needs at least one environment")
    return float(np.mean([v for _, v in series]))


def dmigd(migd_by_config: dict[str, float]) -> float:
    """Mean MIGD over environment configurations."""
    if not migd_by_config:
        raise ValueError("dmigd needs at least one configuration")
    return float(np.mean(list(migd_by_config.values())))


@dataclass
class MetricRecord:
    """Per-run results: one IGD per environment plus bookkeeping.

    ``evaluations_used`` counts optimizer evaluations only; evaluations
    spent mining classifier training data are tracked separately in
    ``seeding_evals`` so budget parity across variants stays auditable.
    """

    problem_name: str
    config_id: str
    variant: str
    seed: int
    igd_series: list[tuple[float, float]]
    migd: float
    evaluations_used: int
    env_evals: list[int] = field(default_factory=list)
    seeding_evals: list[int] = field(default_factory=list)
    seed_modes: list[str] = field(default_factory=list)
    seed_accepted: list[int] = field(default_factory=list)
    seed_filled: list[int] = field(default_factory=list)
    first_igd: list[float] = field(default_factory=list)
    backend_name: str = ""

    def validate(self) -> None:
        if not self.igd_series:
            raise ValueError("record has no environments")
        expect = float(np.mean([v for _, v in self.igd_series]))
        if abs(expect - self.migd) > 1e-12:
            raise ValueError(
                f"migd {self.migd!r} does not match its igd series "
                f"(expected {expect!r})"
            )
