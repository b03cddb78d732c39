"""Binary soft-margin kernel SVM trained by sequential minimal optimization.

The dual max sum(a_i) - 1/2 sum(a_i a_j y_i y_j K(x_i, x_j)) subject to
0 <= a_i <= C and sum(a_i y_i) = 0 is solved by simplified SMO: scan for a
KKT violator, pair it with a seeded-random partner, solve the two-variable
subproblem in closed form.  The bias is recomputed afterwards from the
margin support vectors.
"""

from dataclasses import dataclass, field

import numpy as np

from .. import _backend
from ..errors import ParameterError

KERNEL_KINDS = ("linear", "poly", "rbf")

DEFAULT_TOL = 1e-3
DEFAULT_MAX_PASSES = 10
DEFAULT_MAX_SWEEPS = 300_000  # sweeps without alpha movement cost O(n), not O(n^2)


@dataclass(frozen=True)
class KernelSpec:
    kind: str = "linear"
    degree: int | None = None
    gamma: float | None = None
    coef0: float | None = None

    def __post_init__(self):
        if self.kind not in KERNEL_KINDS:
            raise ParameterError(f"kernel kind must be one of {KERNEL_KINDS}, got {self.kind!r}")
        if self.kind == "linear":
            if self.degree is not None or self.gamma is not None or self.coef0 is not None:
                raise ParameterError("linear kernel takes no parameters")
        elif self.kind == "poly":
            if self.degree is None or self.degree < 1:
                raise ParameterError("poly kernel needs an integer degree >= 1")
            if self.coef0 is None:
                raise ParameterError("poly kernel needs coef0")
            if self.gamma is not None:
                raise ParameterError("poly kernel takes no gamma")
        else:
            if self.gamma is None or self.gamma <= 0:
                raise ParameterError("rbf kernel needs gamma > 0")
            if self.degree is not None or self.coef0 is not None:
                raise ParameterError("rbf kernel takes only gamma")

    @classmethod
    def linear(cls):
        return cls("linear")

    @classmethod
    def poly(cls, degree, coef0=0.0):
        return cls("poly", degree=degree, coef0=coef0)

    @classmethod
    def rbf(cls, gamma):
        return cls("rbf", gamma=gamma)


@dataclass(frozen=True, eq=False)
class TrainingSet:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)
        if x.ndim != 2 or x.shape[0] < 2:
            raise ParameterError("training set needs at least 2 vectors of equal dimension")
        if y.shape != (x.shape[0],):
            raise ParameterError("labels must be one per training vector")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise ParameterError("labels must be -1 or +1")
        if not (np.any(y == 1.0) and np.any(y == -1.0)):
            raise ParameterError("both labels must be present")

    @property
    def n(self):
        return self.x.shape[0]

    @property
    def dim(self):
        return self.x.shape[1]


def kernel_eval(k: KernelSpec, u, v) -> float:
    """K(u, v) for a single vector pair."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1:
        raise ParameterError(f"kernel arguments must be equal-length vectors, got {u.shape} and {v.shape}")
    if k.kind == "linear":
        return float(u @ v)
    if k.kind == "poly":
        return float((u @ v + k.coef0) ** k.degree)
    d = u - v
    return float(np.exp(-k.gamma * (d @ d)))


def kernel_matrix(k: KernelSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """K(a_i, b_j) for all pairs; a is (n, d), b is (m, d)."""
    if a.shape[1] != b.shape[1]:
        raise ParameterError(f"dimension mismatch: {a.shape[1]} vs {b.shape[1]}")
    prod = a @ b.T
    if k.kind == "linear":
        return prod
    if k.kind == "poly":
        return (prod + k.coef0) ** k.degree
    sq = (a * a).sum(axis=1)[:, None] + (b * b).sum(axis=1)[None, :] - 2.0 * prod
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-k.gamma * sq)


@dataclass(frozen=True, eq=False)
class TrainedBinarySvm:
    """Dual solution: training vectors with multipliers, bias and kernel."""

    x: np.ndarray
    y: np.ndarray
    alphas: np.ndarray
    bias: float
    kernel: KernelSpec
    c: float
    converged: bool = True
    sweeps: int = field(default=0, compare=False)

    @property
    def dim(self):
        return self.x.shape[1]

    @property
    def support_mask(self):
        return self.alphas > 0.0

    @property
    def support_vectors(self):
        return self.x[self.support_mask]

    def support_only(self) -> "TrainedBinarySvm":
        """Copy keeping only the vectors that enter the decision function."""
        m = self.support_mask
        return TrainedBinarySvm(
            self.x[m], self.y[m], self.alphas[m], self.bias,
            self.kernel, self.c, self.converged, self.sweeps,
        )

    def linear_weight(self) -> np.ndarray:
        """Explicit weight vector sum(a_i y_i x_i); linear kernels only."""
        if self.kernel.kind != "linear":
            raise ParameterError("explicit weights exist only for the linear kernel")
        return (self.alphas * self.y) @ self.x


def smo_train(data: TrainingSet, c: float, kernel: KernelSpec,
              tol: float = DEFAULT_TOL, max_passes: int = DEFAULT_MAX_PASSES,
              seed: int = 0, max_sweeps: int = DEFAULT_MAX_SWEEPS) -> TrainedBinarySvm:
    """Train the dual with simplified SMO.

    Identical inputs and seed give a bit-identical model.  If the sweep
    budget runs out before `max_passes` consecutive clean sweeps, the best
    iterate is returned flagged converged=False.
    """
    if c <= 0:
        raise ParameterError(f"C must be > 0, got {c}")
    if tol <= 0:
        raise ParameterError(f"tol must be > 0, got {tol}")
    k_matrix = np.ascontiguousarray(kernel_matrix(kernel, data.x, data.x))
    alphas, _, converged, sweeps = _backend.smo_optimize(
        k_matrix, np.ascontiguousarray(data.y), float(c), float(tol),
        int(max_passes), int(max_sweeps), seed & ((1 << 64) - 1),
    )
    # snap roundoff-level deviations onto the box bounds so that the
    # free/bound classification downstream is exact
    snap = 1e-10 * max(1.0, c)
    alphas[alphas <= snap] = 0.0
    alphas[alphas >= c - snap] = c
    bias = _recompute_bias(alphas, data.y, k_matrix, c)
    return TrainedBinarySvm(data.x, data.y, alphas, bias, kernel, float(c),
                            bool(converged), int(sweeps))


def _recompute_bias(alphas, y, k_matrix, c):
    """Bias from margin SVs (0 < a < C), else the KKT interval midpoint."""
    g = (alphas * y) @ k_matrix  # decision values without bias
    free = (alphas > 0.0) & (alphas < c)
    if free.any():
        return float((y[free] - g[free]).mean())
    # y_i (g_i + b) >= 1 for a_i = 0 and <= 1 for a_i = C bracket b
    lower = np.concatenate([
        (1.0 - g)[(alphas == 0.0) & (y > 0)],
        (-1.0 - g)[(alphas == c) & (y < 0)],
    ])
    upper = np.concatenate([
        (1.0 - g)[(alphas == c) & (y > 0)],
        (-1.0 - g)[(alphas == 0.0) & (y < 0)],
    ])
    if lower.size and upper.size:
        return float((lower.max() + upper.min()) / 2.0)
    if lower.size:
        return float(lower.max())
    if upper.size:
        return float(upper.min())
    return 0.0


def decision_values(model: TrainedBinarySvm, x: np.ndarray) -> np.ndarray:
    """Pre-sign decision values sum(a_i y_i K(x_i, x)) + b for rows of x."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[1] != model.dim:
        raise ParameterError(f"expected (n, {model.dim}) inputs, got shape {x.shape}")
    m = model.support_mask
    if not m.any():
        return np.full(x.shape[0], model.bias)
    k = kernel_matrix(model.kernel, x, model.x[m])
    return k @ (model.alphas[m] * model.y[m]) + model.bias


def decision_value(model: TrainedBinarySvm, x) -> float:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ParameterError(f"expected a single vector, got shape {x.shape}")
    return float(decision_values(model, x[None, :])[0])


def predict(model: TrainedBinarySvm, x) -> int:
    """Sign of the decision value; exactly 0 maps to +1."""
    return 1 if decision_value(model, x) >= 0.0 else -1


def dual_objective(alphas, y, k_matrix) -> float:
    """Value of the dual objective at `alphas`."""
    ay = alphas * y
    return float(alphas.sum() - 0.5 * (ay @ k_matrix @ ay))


def kkt_violation(model: TrainedBinarySvm) -> float:
    """Largest violation of the KKT conditions over the training set.

    0 means every point satisfies its condition exactly; trained models
    should stay below the training tolerance.
    """
    k = kernel_matrix(model.kernel, model.x, model.x)
    f = k @ (model.alphas * model.y) + model.bias
    margins = model.y * f
    at_zero = model.alphas == 0.0
    at_c = model.alphas == model.c
    free = ~(at_zero | at_c)
    worst = 0.0
    if at_zero.any():
        worst = max(worst, float((1.0 - margins[at_zero]).max()))
    if at_c.any():
        worst = max(worst, float((margins[at_c] - 1.0).max()))
    if free.any():
        worst = max(worst, float(np.abs(margins[free] - 1.0).max()))
    return worst
