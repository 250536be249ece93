"""Front-quality metric tests: IGD against a literal oracle, then the
time and configuration averages built on top of it."""

import math

import numpy as np
import pytest

from svmdmoea.metrics import MetricRecord, dmigd, igd, migd
from svmdmoea.problems import make_problem

from _oracles import igd_slow


class TestIgd:
    def test_identity_is_exactly_zero(self):
        front = make_problem("FDA4").reference_front(0.3, 400)
        assert igd(front, front.points) == 0.0

    def test_identity_on_plain_arrays(self, rng):
        pts = rng.uniform(-3.0, 3.0, size=(37, 3))
        assert igd(pts, pts) == 0.0

    def test_two_point_reference_half_matched(self):
        # unmatched corner contributes sqrt(2), matched one contributes 0
        ref = [(0.0, 0.0), (1.0, 1.0)]
        approx = [(0.0, 0.0)]
        assert igd(ref, approx) == pytest.approx(math.sqrt(2.0) / 2.0, abs=1e-12)

    def test_singleton_exact_match(self):
        assert igd([(2.0, 5.0)], [(2.0, 5.0)]) == 0.0

    def test_matches_literal_oracle(self, rng):
        for _ in range(30):
            n_obj = int(rng.integers(2, 4))
            ref = rng.normal(size=(int(rng.integers(1, 40)), n_obj))
            approx = rng.normal(size=(int(rng.integers(1, 25)), n_obj))
            assert igd(ref, approx) == pytest.approx(
                igd_slow(ref, approx), abs=1e-12)

    def test_translation_invariance(self, rng):
        ref = rng.uniform(size=(20, 2))
        approx = rng.uniform(size=(11, 2))
        shift = np.array([4.2, -1.7])
        assert igd(ref + shift, approx + shift) == pytest.approx(
            igd(ref, approx), abs=1e-12)

    def test_scale_equivariance(self, rng):
        ref = rng.uniform(size=(20, 3))
        approx = rng.uniform(size=(9, 3))
        assert igd(3.0 * ref, 3.0 * approx) == pytest.approx(
            3.0 * igd(ref, approx), abs=1e-12)

    def test_denser_approximation_never_hurts(self, rng):
        ref = rng.uniform(size=(30, 2))
        approx = rng.uniform(size=(8, 2))
        extra = np.vstack([approx, rng.uniform(size=(6, 2))])
        assert igd(ref, extra) <= igd(ref, approx) + 1e-15

    def test_empty_approximation_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            igd([(0.0, 0.0)], np.empty((0, 2)))

    def test_objective_count_mismatch_rejected(self):
        with pytest.raises(ValueError, match="mismatch"):
            igd([(0.0, 0.0)], [(1.0, 1.0, 1.0)])


class TestMigd:
    def test_two_environment_mean(self):
        assert migd([(0.0, 0.1), (0.1, 0.3)]) == pytest.approx(0.2, abs=1e-12)

    def test_singleton(self):
        assert migd([(0.4, 0.7)]) == pytest.approx(0.7, abs=1e-12)

    def test_permutation_invariant(self, rng):
        series = [(float(t), float(v))
                  for t, v in zip(range(7), rng.uniform(size=7))]
        shuffled = list(series)
        rng.shuffle(shuffled)
        assert migd(shuffled) == pytest.approx(migd(series), abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            migd([])


class TestDmigd:
    def test_two_config_mean(self):
        assert dmigd({"C1": 0.1, "C2": 0.3}) == pytest.approx(0.2, abs=1e-12)

    def test_eight_equal_values_collapse(self):
        vals = {f"C{i}": 0.3125 for i in range(1, 9)}
        assert dmigd(vals) == pytest.approx(0.3125, abs=1e-12)

    def test_empty_rejected(self):
        with pytest.raises(ValueError, match="at least one"):
            dmigd({})


def _record(series, migd_value):
    return MetricRecord(
        problem_name="dMOP2",
        config_id="C1",
        variant="svm_dmoea",
        seed=0,
        igd_series=series,
        migd=migd_value,
        evaluations_used=600,
    )


class TestMetricRecord:
    def test_consistent_record_validates(self):
        series = [(0.0, 0.1), (0.1, 0.2), (0.2, 0.3)]
        _record(series, 0.2).validate()

    def test_migd_mismatch_rejected(self):
        series = [(0.0, 0.1), (0.1, 0.2)]
        with pytest.raises(ValueError, match="does not match"):
            _record(series, 0.2).validate()

    def test_empty_series_rejected(self):
        with pytest.raises(ValueError, match="no environments"):
            _record([], 0.0).validate()
