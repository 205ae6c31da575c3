"""Problem instances and the drift fields they induce.

A :class:`ModelSpec` bundles the interaction kernel, noise intensity, time
horizon, transition endpoints, and the initial law.  The field evaluators
below turn a kernel into

* the mean-field drift/divergence against an empirical measure, and
* the N-particle drift/divergence of the symmetric interacting system
  (pair average over all j, including j = i).

Every registered kernel is affine in its second argument, so population
averages collapse onto the population mean; the evaluators use that
identity, and the tests check them against brute-force pair sums.
"""

from dataclasses import dataclass, field

import numpy as np

from .kernels import DriftKernel, make_kernel
from .measures import EmpiricalMeasure


@dataclass(frozen=True)
class InitialLaw:
    """Initial law of the particles: dirac(mean) or gaussian(mean, std)."""

    kind: str
    mean: np.ndarray
    std: float = 0.0

    def __post_init__(self):
        if self.kind not in ("dirac", "gaussian"):
            raise ValueError(f"initial law kind must be 'dirac' or 'gaussian', got {self.kind!r}")
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        if not np.isfinite(mean).all():
            raise ValueError("initial law mean must be finite")
        if self.kind == "gaussian" and not (np.isfinite(self.std) and self.std >= 0):
            raise ValueError("gaussian initial law needs std >= 0")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "std", float(self.std))

    def sample(self, n, rng):
        """Draw n initial positions (n, d)."""
        base = np.tile(self.mean, (n, 1))
        if self.kind == "gaussian" and self.std > 0:
            base = base + self.std * rng.standard_normal(base.shape)
        return base

    def describe(self):
        out = {"kind": self.kind, "mean": self.mean.tolist()}
        if self.kind == "gaussian":
            out["std"] = self.std
        return out


@dataclass(frozen=True)
class ModelSpec:
    """A transition problem: dynamics, noise, horizon, and endpoints."""

    d: int
    sigma: float
    kernel: DriftKernel
    T: float
    x0: np.ndarray
    xT: np.ndarray
    mu0: InitialLaw = None

    def __post_init__(self):
        if int(self.d) < 1:
            raise ValueError("state dimension d must be >= 1")
        object.__setattr__(self, "d", int(self.d))
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise ValueError(f"sigma must be a positive scalar (got {self.sigma!r})")
        if not (np.isfinite(self.T) and self.T > 0):
            raise ValueError(f"horizon T must be positive (got {self.T!r})")
        object.__setattr__(self, "sigma", float(self.sigma))
        object.__setattr__(self, "T", float(self.T))
        for name in ("x0", "xT"):
            v = np.atleast_1d(np.asarray(getattr(self, name), dtype=float))
            if v.shape != (self.d,):
                raise ValueError(f"{name} must have length d={self.d} (got shape {v.shape})")
            if not np.isfinite(v).all():
                raise ValueError(f"{name} must be finite")
            object.__setattr__(self, name, v)
        mu0 = self.mu0 if self.mu0 is not None else InitialLaw("dirac", self.x0)
        if mu0.mean.shape != (self.d,):
            raise ValueError("mu0 mean must have length d")
        object.__setattr__(self, "mu0", mu0)

    def describe(self):
        return {
            "d": self.d,
            "sigma": self.sigma,
            "T": self.T,
            "x0": self.x0.tolist(),
            "xT": self.xT.tolist(),
            "kernel": self.kernel.describe(),
            "mu0": self.mu0.describe(),
        }


def model_from_dict(doc):
    """Build a ModelSpec from a plain mapping (the CLI config schema)."""
    kernel_doc = dict(doc["kernel"])
    family = kernel_doc.pop("family")
    kernel = make_kernel(family, **kernel_doc)
    mu0_doc = doc.get("mu0")
    mu0 = None
    if mu0_doc is not None:
        mu0 = InitialLaw(mu0_doc["kind"], mu0_doc["mean"], mu0_doc.get("std", 0.0))
    return ModelSpec(
        d=doc["d"],
        sigma=doc["sigma"],
        kernel=kernel,
        T=doc["T"],
        x0=doc["x0"],
        xT=doc["xT"],
        mu0=mu0,
    )


# ---------------------------------------------------------------------------
# kernel-induced fields
# ---------------------------------------------------------------------------

def eval_kernel(kernel: DriftKernel, x, y):
    """b(x, y) for the kernel's family."""
    return kernel.eval(x, y)


def meanfield_drift(kernel: DriftKernel, x, mu: EmpiricalMeasure):
    """Drift sum_k w_k b(x, y_k); evaluated at the measure mean (affine in y)."""
    return kernel.eval(x, mu.mean())


def meanfield_divergence(kernel: DriftKernel, x, mu: EmpiricalMeasure):
    """First-slot divergence sum_k w_k div1 b(x, y_k), measure held fixed."""
    return kernel.div1(x, mu.mean())


def particle_drift(kernel: DriftKernel, X):
    """Rows (1/N) sum_j b(x_i, x_j), self-term included.

    ``X`` may be (N, d) or batched (..., N, d); the pair average collapses
    onto the per-population mean because registered kernels are affine in y.
    """
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=-2, keepdims=True)
    return kernel.eval(X, np.broadcast_to(mean, X.shape))


def particle_drift_bruteforce(kernel: DriftKernel, X):
    """O(N^2) pair-sum reference for :func:`particle_drift` (test oracle)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    return np.stack([kernel.eval(np.tile(X[i], (n, 1)), X).mean(axis=0) for i in range(n)])


def particle_divergence(kernel: DriftKernel, X):
    """Exact divergence of the flattened N-particle drift field.

    trace of the (N d) x (N d) Jacobian: the j = i summand differentiates
    through both kernel slots, giving
    sum_i [ (1/N) sum_j div1 b(x_i, x_j) + (1/N) div2 b(x_i, x_i) ].
    Batched over leading axes of ``X``.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[-2]
    mean = X.mean(axis=-2, keepdims=True)
    div1_part = kernel.div1(X, np.broadcast_to(mean, X.shape)).sum(axis=-1)
    div2_self = kernel.div2(X, X).sum(axis=-1) / n
    return div1_part + div2_self


def particle_divergence_bruteforce(kernel: DriftKernel, X):
    """Pair-sum reference for :func:`particle_divergence` (test oracle)."""
    X = np.asarray(X, dtype=float)
    n = X.shape[0]
    total = 0.0
    for i in range(n):
        total += kernel.div1(np.tile(X[i], (n, 1)), X).mean()
        total += kernel.div2(X[i], X[i]) / n
    return float(total)


def particle_field_jacobian_transpose(kernel: DriftKernel, X, R):
    """(J_F)^T R for the N-particle drift field F, in O(N d).

    Row i of the result is
        jac1(x_i, mean)^T r_i + (1/N) sum_j jac2(x_j, x_i)^T r_j,
    using that jac2's diagonal does not depend on its second slot for any
    registered family.  Batched over leading axes.
    """
    X = np.asarray(X, dtype=float)
    R = np.asarray(R, dtype=float)
    mean = X.mean(axis=-2, keepdims=True)
    own = kernel.jac1_diag(X, np.broadcast_to(mean, X.shape)) * R
    coupling = (kernel.jac2_diag(X, X) * R).mean(axis=-2, keepdims=True)
    return own + np.broadcast_to(coupling, X.shape).copy()


def particle_divergence_gradient(kernel: DriftKernel, X):
    """Gradient of div_X F with respect to every particle position.

    Per particle i:
        (1/N) sum_j grad_x div1(x_i, x_j)          [local curvature]
      + (1/N) sum_j grad_y div1(x_j, x_i)          [law derivative]
      + (1/N) (grad_x + grad_y) div2(x_i, x_i)     [self term]
    Each sum collapses because the summand is constant in the averaged slot
    for every registered family.  Batched over leading axes.
    """
    X = np.asarray(X, dtype=float)
    n = X.shape[-2]
    mean = np.broadcast_to(X.mean(axis=-2, keepdims=True), X.shape)
    out = kernel.grad_x_div1(X, mean)
    out = out + kernel.grad_y_div1(mean, X)
    out = out + kernel.self_divergence_gradient(X) / n
    return out
