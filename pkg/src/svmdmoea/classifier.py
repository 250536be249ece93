"""Soft-margin kernel SVM trained by sequential minimal optimization.

Minimizes (1/2)||w||^2 + C sum(xi_i) through its dual

    max  sum(alpha_i) - (1/2) sum_ij alpha_i alpha_j y_i y_j k(x_i, x_j)
    s.t. sum(alpha_i y_i) = 0,  0 <= alpha_i <= C

with the decision function f(x) = sum(y_i alpha_i k(x, x_i)) + b.  The
bias is recovered after training by averaging the KKT equalities of the
unbounded support vectors.

Feature vectors are expected in the unit box; the optimization layer
normalizes decision vectors by the problem bounds before they get here.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from . import backend

KERNEL_KINDS = ("linear", "poly", "rbf")


class DegenerateTrainingSetError(ValueError):
    """Raised when training data does not contain both classes."""


@dataclass(frozen=True)
class Kernel:
    """Kernel function selector: linear, polynomial or Gaussian RBF."""

    kind: str
    degree: int = 3
    coef0: float = 1.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "poly" and self.degree < 1:
            raise ValueError("polynomial degree must be >= 1")
        if self.kind == "rbf" and self.gamma <= 0.0:
            raise ValueError("rbf gamma must be positive")

    @classmethod
    def linear(cls) -> "Kernel":
        return cls("linear")

    @classmethod
    def polynomial(cls, degree: int, coef0: float = 1.0) -> "Kernel":
        return cls("poly", degree=degree, coef0=coef0)

    @classmethod
    def rbf(cls, gamma: float) -> "Kernel":
        return cls("rbf", gamma=gamma)

    def gram(self, xs, zs) -> np.ndarray:
        """Kernel matrix k(xs_i, zs_j) of shape (len(xs), len(zs))."""
        xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
        zs = np.atleast_2d(np.asarray(zs, dtype=np.float64))
        if self.kind == "linear":
            return xs @ zs.T
        if self.kind == "poly":
            return (xs @ zs.T + self.coef0) ** self.degree
        sq = (
            (xs ** 2).sum(axis=1)[:, None]
            + (zs ** 2).sum(axis=1)[None, :]
            - 2.0 * (xs @ zs.T)
        )
        # the expansion can go a hair negative for coincident points
        return np.exp(-self.gamma * np.maximum(sq, 0.0))


def kernel_eval(kernel: Kernel, a, b) -> float:
    """Kernel value for a single pair of feature vectors."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError("kernel arguments must have equal length")
    return float(kernel.gram(a[None, :], b[None, :])[0, 0])


@dataclass
class TrainingSet:
    """Labeled features: samples in the unit box, labels in {-1, +1}."""

    samples: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.float64)
        if self.samples.ndim != 2:
            raise ValueError("samples must be a 2-D array")
        if self.labels.shape != (self.samples.shape[0],):
            raise ValueError("labels must match the number of samples")
        if not np.isin(self.labels, (-1.0, 1.0)).all():
            raise ValueError("labels must be -1 or +1")
        if self.samples.size and (
            self.samples.min() < -1e-9 or self.samples.max() > 1.0 + 1e-9
        ):
            raise ValueError("features must lie in the unit box")
        if not ((self.labels == 1.0).any() and (self.labels == -1.0).any()):
            raise DegenerateTrainingSetError(
                "degenerate training set: both classes must be present"
            )

    def __len__(self):
        return self.samples.shape[0]


@dataclass
class SmoParams:
    C: float = 10.0
    tolerance: float = 1e-3
    max_passes: int = 5
    max_iterations: int = 100_000

    def __post_init__(self):
        if self.C <= 0.0:
            raise ValueError("C must be positive")
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_passes < 1 or self.max_iterations < 1:
            raise ValueError("iteration limits must be positive")


@dataclass
class SvmModel:
    """Trained classifier: support vectors with their coefficients.

    ``train_alphas`` keeps the full pre-pruning coefficient vector for
    diagnostics (dual feasibility, KKT checks); it is not serialized.
    """

    support_vectors: np.ndarray
    alphas: np.ndarray
    sv_labels: np.ndarray
    bias: float
    kernel: Kernel
    C: float
    converged: bool = True
    iterations: int = 0
    train_alphas: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.support_vectors = np.asarray(self.support_vectors,
                                          dtype=np.float64)
        self.alphas = np.asarray(self.alphas, dtype=np.float64)
        self.sv_labels = np.asarray(self.sv_labels, dtype=np.float64)
        if (self.alphas < 0.0).any() or (self.alphas > self.C).any():
            raise ValueError("support coefficients must lie in [0, C]")

    @property
    def n_features(self) -> int:
        return self.support_vectors.shape[1] if self.support_vectors.size else 0


def train(data: TrainingSet, kernel: Kernel, params: SmoParams,
          rng: np.random.Generator) -> SvmModel:
    """Fit a soft-margin SVM on ``data`` with the SMO solver.

    Deterministic given the rng state: the solver's partner selection is
    driven by one integer drawn here.  Raises
    :class:`DegenerateTrainingSetError` for single-class input (via
    TrainingSet validation).
    """
    x = data.samples
    y = data.labels
    gram = kernel.gram(x, x)
    seed = int(rng.integers(0, 2 ** 63 - 1))
    # the averaged-bias step below can shift decision values by up to the
    # sweep tolerance, so run the sweeps at half the advertised tolerance
    inner_tol = 0.5 * params.tolerance
    alpha, b_run, iterations, converged = backend.kernels.smo_solve(
        gram, y, params.C, inner_tol, params.max_passes,
        params.max_iterations, seed,
    )

    balance = float(np.dot(alpha, y))
    if abs(balance) > 1e-6:
        raise RuntimeError(
            f"SMO violated the dual equality constraint (sum alpha*y = {balance})"
        )

    margins = gram @ (alpha * y)  # decision values without bias
    unbounded = (alpha > 0.0) & (alpha < params.C)
    if unbounded.any():
        bias = float(np.mean(y[unbounded] - margins[unbounded]))
    else:
        bias = float(b_run)

    keep = alpha > 0.0
    return SvmModel(
        support_vectors=x[keep].copy(),
        alphas=alpha[keep].copy(),
        sv_labels=y[keep].copy(),
        bias=bias,
        kernel=kernel,
        C=params.C,
        converged=bool(converged),
        iterations=int(iterations),
        train_alphas=alpha,
    )


def decision_values(model: SvmModel, xs) -> np.ndarray:
    """Signed distances to the separating surface for a batch of features."""
    xs = np.atleast_2d(np.asarray(xs, dtype=np.float64))
    if model.support_vectors.shape[0] == 0:
        return np.full(xs.shape[0], model.bias)
    gram = model.kernel.gram(xs, model.support_vectors)
    return gram @ (model.alphas * model.sv_labels) + model.bias


def decision_value(model: SvmModel, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("decision_value expects a single feature vector")
    return float(decision_values(model, x[None, :])[0])


def predict(model: SvmModel, x) -> int:
    """Class label, with the boundary itself mapped to +1."""
    return 1 if decision_value(model, x) >= 0.0 else -1


def predict_batch(model: SvmModel, xs) -> np.ndarray:
    return np.where(decision_values(model, xs) >= 0.0, 1, -1)


def dual_objective(gram: np.ndarray, labels: np.ndarray,
                   alpha: np.ndarray) -> float:
    """Value of the dual objective for a coefficient vector."""
    ay = alpha * labels
    return float(alpha.sum() - 0.5 * ay @ gram @ ay)


def kkt_violations(data: TrainingSet, model: SvmModel) -> np.ndarray:
    """Per-sample KKT violation magnitudes for a model trained on ``data``.

    Requires the model's full coefficient vector (``train_alphas``).
    Violations are 0 when alpha = 0 and y*f >= 1, when alpha = C and
    y*f <= 1, and when 0 < alpha < C and y*f = 1.
    """
    if model.train_alphas is None:
        raise ValueError("model does not carry its training coefficients")
    alpha = model.train_alphas
    yf = data.labels * decision_values(model, data.samples)
    v = np.zeros(len(data))
    at_zero = alpha <= 0.0
    at_c = alpha >= model.C
    interior = ~(at_zero | at_c)
    v[at_zero] = np.maximum(0.0, 1.0 - yf[at_zero])
    v[at_c] = np.maximum(0.0, yf[at_c] - 1.0)
    v[interior] = np.abs(yf[interior] - 1.0)
    return v


# ---------------------------------------------------------------------------
# text serialization

_FORMAT_HEADER = "svm-model 1"


def dump_model(model: SvmModel) -> str:
    """Serialize a model to text; floats keep full round-trip precision."""
    out = io.StringIO()
    out.write(_FORMAT_HEADER + "\n")
    k = model.kernel
    if k.kind == "linear":
        out.write("kernel linear\n")
    elif k.kind == "poly":
        out.write(f"kernel poly degree={k.degree} coef0={k.coef0!r}\n")
    else:
        out.write(f"kernel rbf gamma={k.gamma!r}\n")
    out.write(f"C {model.C!r}\n")
    out.write(f"bias {model.bias!r}\n")
    for i in range(model.alphas.shape[0]):
        comps = " ".join(repr(float(v)) for v in model.support_vectors[i])
        out.write(f"sv {int(model.sv_labels[i]):+d} {float(model.alphas[i])!r} "
                  f"{comps}\n")
    return out.getvalue()


def load_model(text: str) -> SvmModel:
    """Inverse of :func:`dump_model`."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0] != _FORMAT_HEADER:
        raise ValueError("not a serialized svm model")
    kernel = None
    c = None
    bias = None
    labels, alphas, vectors = [], [], []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "kernel":
            opts = dict(p.split("=", 1) for p in parts[2:])
            if parts[1] == "linear":
                kernel = Kernel.linear()
            elif parts[1] == "poly":
                kernel = Kernel.polynomial(int(opts["degree"]),
                                           float(opts["coef0"]))
            elif parts[1] == "rbf":
                kernel = Kernel.rbf(float(opts["gamma"]))
            else:
                raise ValueError(f"unknown kernel kind {parts[1]!r}")
        elif parts[0] == "C":
            c = float(parts[1])
        elif parts[0] == "bias":
            bias = float(parts[1])
        elif parts[0] == "sv":
            labels.append(float(parts[1]))
            alphas.append(float(parts[2]))
            vectors.append([float(v) for v in parts[3:]])
        else:
            raise ValueError(f"unrecognized model line: {ln!r}")
    if kernel is None or c is None or bias is None:
        raise ValueError("incomplete model file")
    n = len(labels)
    dim = len(vectors[0]) if vectors else 0
    return SvmModel(
        support_vectors=np.array(vectors, dtype=np.float64).reshape(n, dim),
        alphas=np.array(alphas, dtype=np.float64),
        sv_labels=np.array(labels, dtype=np.float64),
        bias=bias,
        kernel=kernel,
        C=c,
    )


def save_model(model: SvmModel, path) -> None:
    with open(path, "w") as fh:
        fh.write(dump_model(model))


def load_model_file(path) -> SvmModel:
    with open(path) as fh:
        return load_model(fh.read())
