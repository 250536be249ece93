import numpy as np
import pytest

from svmdmoea import (DegenerateTrainingSetError, Kernel, SmoParams,
                      SvmModel, TrainingSet, decision_value,
                      decision_values, dual_objective, kkt_violations,
                      load_model, predict, predict_batch, save_model,
                      train)

from _oracles import dual_max_bruteforce, dual_max_exact


def make_separable(rng, n=20, margin=0.05):
    """Linearly separable 2-D points in [0,1]^2 with both classes."""
    while True:
        w = rng.normal(size=2)
        w /= np.linalg.norm(w)
        b = rng.uniform(0.35, 0.65)
        xs, ys = [], []
        while len(xs) < n:
            x = rng.uniform(0, 1, 2)
            val = w @ x - b
            if abs(val) >= margin:
                xs.append(x)
                ys.append(1.0 if val > 0 else -1.0)
        ys = np.array(ys)
        if (ys > 0).any() and (ys < 0).any():
            return np.array(xs), ys


class TestKernels:
    def test_rbf_self_similarity_is_one(self, rng):
        k = Kernel.rbf(gamma=3.7)
        a = rng.uniform(0, 1, 6)
        assert k.gram(a[None], a[None])[0, 0] == 1.0

    def test_linear_orthogonal(self):
        k = Kernel.linear()
        a = np.array([[1.0, 0.0]])
        b = np.array([[0.0, 1.0]])
        assert k.gram(a, b)[0, 0] == 0.0

    def test_polynomial_example(self):
        k = Kernel.polynomial(degree=2, coef0=1.0)
        a = np.array([[1.0, 1.0]])
        assert k.gram(a, a)[0, 0] == pytest.approx(9.0, abs=1e-12)

    def test_symmetry(self, rng):
        for k in (Kernel.linear(), Kernel.polynomial(3),
                  Kernel.rbf(gamma=0.5)):
            xs = rng.uniform(0, 1, (7, 4))
            g = k.gram(xs, xs)
            assert np.allclose(g, g.T, atol=1e-15)

    def test_rbf_bounded(self, rng):
        k = Kernel.rbf(gamma=2.0)
        xs = rng.uniform(0, 1, (30, 5))
        g = k.gram(xs, xs)
        assert (g > 0).all()
        assert (g <= 1.0).all()

    def test_validation(self):
        with pytest.raises(ValueError):
            Kernel.rbf(gamma=0.0)
        with pytest.raises(ValueError):
            Kernel.polynomial(degree=0)
        with pytest.raises(ValueError):
            Kernel(kind="sigmoid")


class TestTrainingSet:
    def test_rejects_single_class(self):
        xs = np.random.default_rng(0).uniform(0, 1, (5, 2))
        with pytest.raises(DegenerateTrainingSetError):
            TrainingSet(xs, np.ones(5))

    def test_rejects_bad_labels(self):
        xs = np.zeros((2, 2))
        with pytest.raises(ValueError):
            TrainingSet(xs, np.array([1.0, 0.0]))

    def test_rejects_out_of_range_features(self):
        xs = np.array([[0.5, 1.5], [0.2, 0.2]])
        with pytest.raises(ValueError):
            TrainingSet(xs, np.array([1.0, -1.0]))

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            TrainingSet(np.zeros((3, 2)), np.array([1.0, -1.0]))


class TestTwoPointAnalytic:
    def setup_method(self):
        rng = np.random.default_rng(5)
        data = TrainingSet(np.array([[0.0], [1.0]]),
                           np.array([-1.0, 1.0]))
        self.model = train(data, Kernel.linear(), SmoParams(C=10.0), rng)

    def test_coefficients(self):
        assert np.allclose(self.model.train_alphas, [2.0, 2.0], atol=1e-6)
        assert self.model.bias == pytest.approx(-1.0, abs=1e-6)

    def test_boundary_at_midpoint(self):
        assert decision_value(self.model, np.array([0.5])) \
            == pytest.approx(0.0, abs=1e-6)

    def test_side_predictions(self):
        assert predict(self.model, np.array([0.25])) == -1
        assert predict(self.model, np.array([0.75])) == 1

    def test_dual_value(self):
        gram = Kernel.linear().gram(np.array([[0.0], [1.0]]),
                                    np.array([[0.0], [1.0]]))
        val = dual_objective(gram, np.array([-1.0, 1.0]),
                             self.model.train_alphas)
        assert val == pytest.approx(2.0, abs=1e-6)


class TestTrainedModelInvariants:
    @pytest.mark.parametrize("seed", range(6))
    def test_dual_feasibility_and_kkt(self, seed):
        rng = np.random.default_rng(seed)
        xs, ys = make_separable(rng, n=24)
        params = SmoParams(C=10.0)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5), params,
                      rng)
        alphas = model.train_alphas
        assert (alphas >= 0).all()
        assert (alphas <= params.C).all()
        assert abs(float(alphas @ ys)) <= 1e-6
        assert kkt_violations(TrainingSet(xs, ys), model).max() \
            <= params.tolerance

    def test_unbounded_support_vector_margin(self, rng):
        xs, ys = make_separable(rng)
        params = SmoParams(C=10.0)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5), params,
                      rng)
        vals = decision_values(model, xs)
        unbounded = (model.train_alphas > 0) \
            & (model.train_alphas < params.C)
        assert unbounded.any()
        assert np.abs(ys[unbounded] * vals[unbounded] - 1.0).max() \
            <= params.tolerance

    @pytest.mark.parametrize("seed", range(8))
    def test_separable_sets_fully_learned(self, seed):
        rng = np.random.default_rng(1000 + seed)
        xs, ys = make_separable(rng)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5),
                      SmoParams(C=100.0), rng)
        assert (predict_batch(model, xs) == ys).all()

    def test_only_positive_alphas_retained(self, rng):
        xs, ys = make_separable(rng)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5),
                      SmoParams(C=10.0), rng)
        assert (model.alphas > 0).all()
        assert len(model.support_vectors) == len(model.alphas)
        assert len(model.support_vectors) <= len(xs)

    def test_deterministic_given_rng(self):
        xs, ys = make_separable(np.random.default_rng(3))
        models = []
        for _ in range(2):
            rng = np.random.default_rng(77)
            models.append(train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5),
                                SmoParams(C=10.0), rng))
        a, b = models
        assert np.array_equal(a.train_alphas, b.train_alphas)
        assert a.bias == b.bias
        assert a.iterations == b.iterations


class TestDualOptimality:
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 7, 8])
    def test_matches_exact_enumeration(self, m):
        rng = np.random.default_rng(40 + m)
        xs = rng.uniform(0, 1, (m, 2))
        ys = np.where(rng.random(m) < 0.5, 1.0, -1.0)
        if np.all(ys == ys[0]):
            ys[0] = -ys[0]
        kernel = Kernel.rbf(gamma=0.7)
        params = SmoParams(C=10.0, tolerance=1e-5, max_passes=10)
        model = train(TrainingSet(xs, ys), kernel, params, rng)
        gram = kernel.gram(xs, xs)
        w_smo = dual_objective(gram, ys, model.train_alphas)
        w_exact, _ = dual_max_exact(gram, ys, 10.0)
        assert abs(w_smo - w_exact) <= 1e-3

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_grid_refinement_agrees_on_small_sets(self, m):
        rng = np.random.default_rng(90 + m)
        xs = rng.uniform(0, 1, (m, 2))
        ys = np.where(rng.random(m) < 0.5, 1.0, -1.0)
        if np.all(ys == ys[0]):
            ys[0] = -ys[0]
        kernel = Kernel.rbf(gamma=0.7)
        params = SmoParams(C=10.0, tolerance=1e-5, max_passes=10)
        model = train(TrainingSet(xs, ys), kernel, params, rng)
        gram = kernel.gram(xs, xs)
        w_smo = dual_objective(gram, ys, model.train_alphas)
        w_grid, _ = dual_max_bruteforce(gram, ys, 10.0)
        w_exact, _ = dual_max_exact(gram, ys, 10.0)
        assert abs(w_grid - w_exact) <= 1e-4
        assert abs(w_smo - w_grid) <= 1e-3


class TestPrediction:
    def _empty_model(self, bias):
        return SvmModel(support_vectors=np.zeros((0, 2)),
                        alphas=np.zeros(0), sv_labels=np.zeros(0),
                        bias=bias, kernel=Kernel.rbf(gamma=1.0), C=1.0)

    def test_tie_classified_positive(self):
        model = self._empty_model(0.0)
        assert predict(model, np.array([0.3, 0.3])) == 1

    def test_bias_only_models(self, rng):
        xs = rng.uniform(0, 1, (5, 2))
        accept = self._empty_model(1.0)
        reject = self._empty_model(-1.0)
        assert (predict_batch(accept, xs) == 1).all()
        assert (predict_batch(reject, xs) == -1).all()

    def test_dimension_mismatch_rejected(self, rng):
        xs, ys = make_separable(rng)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5),
                      SmoParams(), rng)
        with pytest.raises(ValueError):
            decision_value(model, np.zeros(3))


class TestSerialization:
    def test_round_trip(self, rng, tmp_path):
        xs, ys = make_separable(rng)
        model = train(TrainingSet(xs, ys), Kernel.rbf(gamma=0.5),
                      SmoParams(C=10.0), rng)
        path = tmp_path / "model.txt"
        save_model(model, path)
        back = load_model(path.read_text())
        assert np.abs(back.support_vectors - model.support_vectors).max() \
            <= 1e-12
        assert np.abs(back.alphas - model.alphas).max() <= 1e-12
        assert abs(back.bias - model.bias) <= 1e-12
        assert back.kernel == model.kernel
        assert back.C == model.C
        probe = rng.uniform(0, 1, (10, 2))
        assert np.abs(decision_values(back, probe)
                      - decision_values(model, probe)).max() <= 1e-9

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            load_model("not a model\n")


class TestSmoParams:
    @pytest.mark.parametrize("kwargs", [
        {"C": 0.0}, {"tolerance": -1e-3}, {"max_passes": 0},
        {"max_iterations": 0},
    ])
    def test_validation(self, kwargs):
        with pytest.raises(ValueError):
            SmoParams(**kwargs)
