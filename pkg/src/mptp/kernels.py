"""Pairwise interaction kernels b(x, y) with analytic derivatives.

Every kernel in the registry acts componentwise, so the Jacobians with
respect to either argument are diagonal matrices; the ``*_diag`` methods
return the diagonals as length-d vectors.  All methods broadcast over
leading axes: ``x`` and ``y`` may be any broadcast-compatible arrays whose
trailing axis is the state dimension.

Registered families
-------------------
``zero``
    b(x, y) = 0.
``attract``
    b(x, y) = kappa * (y - x); linear attraction toward the other particle.
``local_plus_attract``
    b(x, y) = g(x) + kappa * (y - x) with a componentwise local drift
    g in {zero, linear, doublewell}: g(x) = 0, lam * x, lam * (x - x^3).
``factored_affine``
    b(x, y) = h(x) * y componentwise, h(x) = a + b * x.

Besides the pointwise derivatives, each kernel supplies the two pieces of
the law-derivative ("population coupling") term that enters the backward
costate equation when the drift averages b over a population:

* :meth:`DriftKernel.coupling_average` reduces a cloud of (position,
  costate) pairs to the single d-vector the costate right-hand side needs;
* :meth:`DriftKernel.mu_term` turns that average into the full coupling
  term, including the law-derivative of the divergence part of the
  running cost (nonzero only for ``factored_affine``).

All kernels here are affine in the second argument, so population averages
of b and of its first-slot divergence collapse onto the population mean;
``affine_in_y`` advertises that and the field evaluators exploit it.
"""

import numpy as np

LOCAL_POTENTIALS = ("zero", "linear", "doublewell")


def _as_state(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 0:
        x = x[None]
    return x


def _check_pair(x, y):
    x = _as_state(x)
    y = _as_state(y)
    if x.shape[-1] != y.shape[-1]:
        raise ValueError(
            f"kernel arguments have mismatched state dimension: "
            f"{x.shape[-1]} vs {y.shape[-1]}"
        )
    return x, y


class DriftKernel:
    """Base class for componentwise pairwise drift kernels."""

    family = "abstract"
    #: every registered family is affine in y, so averaging b(x, .) over a
    #: sample cloud equals evaluating at the cloud mean.
    affine_in_y = True

    # -- pointwise evaluation and derivatives ------------------------------
    def eval(self, x, y):
        raise NotImplementedError

    def jac1_diag(self, x, y):
        """Diagonal of d b(x,y) / d x."""
        raise NotImplementedError

    def jac2_diag(self, x, y):
        """Diagonal of d b(x,y) / d y."""
        raise NotImplementedError

    def jac1(self, x, y):
        """Full first-slot Jacobian as a (d, d) matrix (single point only)."""
        return np.diagflat(self.jac1_diag(x, y))

    def jac2(self, x, y):
        return np.diagflat(self.jac2_diag(x, y))

    def div1(self, x, y):
        """Divergence of b with respect to the first slot."""
        return self.jac1_diag(x, y).sum(axis=-1)

    def div2(self, x, y):
        return self.jac2_diag(x, y).sum(axis=-1)

    # -- derivatives of the slot divergences -------------------------------
    # Defaults cover the families where div1/div2 do not depend on the
    # respective argument; subclasses override the nonzero cases.
    def grad_x_div1(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    def grad_y_div1(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    def grad_x_div2(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    def grad_y_div2(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    def self_divergence_gradient(self, x):
        """Gradient of x -> div2 b(x, x), differentiating through both slots.

        This is the O(1/N) self-interaction correction that distinguishes the
        exact N-particle adjoint from the mean-field costate evaluated at the
        empirical measure.
        """
        x = _as_state(x)
        return self.grad_x_div2(x, x) + self.grad_y_div2(x, x)

    # -- population coupling for the costate equation ----------------------
    def coupling_average(self, xs, ps, weights=None):
        """Family-specific average E[w(x~) * p~] over a (positions, costates) cloud.

        For ``attract``/``local_plus_attract`` the weight is 1 (the kappa
        factor is applied by :meth:`mu_term`); for ``factored_affine`` the
        weight is h(x~).
        """
        raise NotImplementedError

    def mu_term(self, mean_costate, x):
        """Full law-derivative coupling term entering the costate equation.

        Combines the drift coupling built from ``mean_costate`` (see
        :meth:`coupling_average`) with the law-derivative of the divergence
        part of the running cost, -0.5 * grad_y div1, which is constant in
        the population for every registered family.
        """
        raise NotImplementedError

    # -- config round-trip --------------------------------------------------
    def params(self):
        return {}

    def describe(self):
        return {"family": self.family, **self.params()}

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.params().items())
        return f"{type(self).__name__}({args})"


class ZeroKernel(DriftKernel):
    family = "zero"

    def eval(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    def jac1_diag(self, x, y):
        x, y = _check_pair(x, y)
        return np.zeros(np.broadcast_shapes(x.shape, y.shape))

    jac2_diag = jac1_diag

    def coupling_average(self, xs, ps, weights=None):
        ps = np.asarray(ps, dtype=float)
        return np.zeros(ps.shape[-1])

    def mu_term(self, mean_costate, x):
        return np.zeros_like(np.asarray(mean_costate, dtype=float))


def _local_drift(kind, lam, x):
    if kind == "zero":
        return np.zeros_like(x)
    if kind == "linear":
        return lam * x
    if kind == "doublewell":
        return lam * (x - x**3)
    raise ValueError(f"unknown local potential {kind!r}; expected one of {LOCAL_POTENTIALS}")


def _local_drift_prime(kind, lam, x):
    if kind == "zero":
        return np.zeros_like(x)
    if kind == "linear":
        return lam * np.ones_like(x)
    if kind == "doublewell":
        return lam * (1.0 - 3.0 * x**2)
    raise ValueError(f"unknown local potential {kind!r}; expected one of {LOCAL_POTENTIALS}")


def _local_drift_second(kind, lam, x):
    if kind == "zero" or kind == "linear":
        return np.zeros_like(x)
    if kind == "doublewell":
        return -6.0 * lam * x
    raise ValueError(f"unknown local potential {kind!r}; expected one of {LOCAL_POTENTIALS}")


class AttractKernel(DriftKernel):
    family = "attract"

    def __init__(self, kappa=1.0):
        self.kappa = float(kappa)

    def eval(self, x, y):
        x, y = _check_pair(x, y)
        return self.kappa * (y - x)

    def jac1_diag(self, x, y):
        x, y = _check_pair(x, y)
        return np.broadcast_to(-self.kappa, np.broadcast_shapes(x.shape, y.shape)).copy()

    def jac2_diag(self, x, y):
        x, y = _check_pair(x, y)
        return np.broadcast_to(self.kappa, np.broadcast_shapes(x.shape, y.shape)).copy()

    def coupling_average(self, xs, ps, weights=None):
        ps = np.asarray(ps, dtype=float).reshape(-1, np.shape(ps)[-1])
        if weights is None:
            return ps.mean(axis=0)
        w = np.asarray(weights, dtype=float)
        return w @ ps

    def mu_term(self, mean_costate, x):
        return self.kappa * np.asarray(mean_costate, dtype=float)

    def params(self):
        return {"kappa": self.kappa}


class LocalPlusAttractKernel(AttractKernel):
    """b(x, y) = g(x) + kappa (y - x): confined mean-field interaction."""

    family = "local_plus_attract"

    def __init__(self, kappa=1.0, local="zero", lam=1.0):
        super().__init__(kappa)
        if local not in LOCAL_POTENTIALS:
            raise ValueError(f"unknown local potential {local!r}; expected one of {LOCAL_POTENTIALS}")
        self.local = local
        self.lam = float(lam)

    def eval(self, x, y):
        x, y = _check_pair(x, y)
        return _local_drift(self.local, self.lam, x) + self.kappa * (y - x)

    def jac1_diag(self, x, y):
        x, y = _check_pair(x, y)
        out = _local_drift_prime(self.local, self.lam, x) - self.kappa
        return np.broadcast_to(out, np.broadcast_shapes(x.shape, y.shape)).copy()

    def grad_x_div1(self, x, y):
        x, y = _check_pair(x, y)
        out = _local_drift_second(self.local, self.lam, x)
        return np.broadcast_to(out, np.broadcast_shapes(x.shape, y.shape)).copy()

    def params(self):
        return {"kappa": self.kappa, "local": self.local, "lam": self.lam}


class FactoredAffineKernel(DriftKernel):
    """b(x, y) = h(x) * y componentwise with affine h(x) = a + b x."""

    family = "factored_affine"

    def __init__(self, a=0.0, b=1.0):
        self.a = float(a)
        self.b = float(b)

    def h(self, x):
        return self.a + self.b * np.asarray(x, dtype=float)

    def eval(self, x, y):
        x, y = _check_pair(x, y)
        return self.h(x) * y

    def jac1_diag(self, x, y):
        x, y = _check_pair(x, y)
        return self.b * y * np.ones_like(x)

    def jac2_diag(self, x, y):
        x, y = _check_pair(x, y)
        return self.h(x) * np.ones_like(y)

    def grad_y_div1(self, x, y):
        x, y = _check_pair(x, y)
        return np.broadcast_to(self.b, np.broadcast_shapes(x.shape, y.shape)).copy()

    def grad_x_div2(self, x, y):
        x, y = _check_pair(x, y)
        return np.broadcast_to(self.b, np.broadcast_shapes(x.shape, y.shape)).copy()

    def coupling_average(self, xs, ps, weights=None):
        d = np.shape(ps)[-1]
        xs = np.asarray(xs, dtype=float).reshape(-1, d)
        ps = np.asarray(ps, dtype=float).reshape(-1, d)
        weighted = self.h(xs) * ps
        if weights is None:
            return weighted.mean(axis=0)
        w = np.asarray(weights, dtype=float)
        return w @ weighted

    def mu_term(self, mean_costate, x):
        mean_costate = np.asarray(mean_costate, dtype=float)
        return mean_costate - 0.5 * self.b * np.ones_like(mean_costate)

    def params(self):
        return {"a": self.a, "b": self.b}


KERNEL_FAMILIES = {
    "zero": ZeroKernel,
    "attract": AttractKernel,
    "local_plus_attract": LocalPlusAttractKernel,
    "factored_affine": FactoredAffineKernel,
}


def make_kernel(family, **params):
    """Construct a kernel from its registry name and named parameters."""
    try:
        cls = KERNEL_FAMILIES[family]
    except KeyError:
        raise ValueError(
            f"unknown kernel family {family!r}; registered: {sorted(KERNEL_FAMILIES)}"
        ) from None
    return cls(**params)
