import numpy as np
import pytest

from mptp.kernels import make_kernel
from mptp.measures import EmpiricalMeasure
from mptp.model import (
    ModelSpec,
    InitialLaw,
    eval_kernel,
    meanfield_drift,
    meanfield_divergence,
    model_from_dict,
    particle_drift,
    particle_drift_bruteforce,
    particle_divergence,
    particle_divergence_bruteforce,
    particle_field_jacobian_transpose,
    particle_divergence_gradient,
)
from oracles import central_diff_jacobian

RNG = np.random.default_rng(11)


def spec_1d(kernel=None, sigma=1.0, T=1.0):
    return ModelSpec(d=1, sigma=sigma, kernel=kernel or make_kernel("zero"),
                     T=T, x0=[0.0], xT=[1.0])


def all_kernels():
    return [
        make_kernel("zero"),
        make_kernel("attract", kappa=1.3),
        make_kernel("local_plus_attract", kappa=0.8, local="doublewell", lam=1.0),
        make_kernel("factored_affine", a=0.3, b=-0.9),
    ]


class TestModelSpec:
    def test_rejects_bad_fields(self):
        k = make_kernel("zero")
        with pytest.raises(ValueError, match="sigma"):
            ModelSpec(d=1, sigma=-1.0, kernel=k, T=1.0, x0=[0.0], xT=[1.0])
        with pytest.raises(ValueError, match="T must be positive"):
            ModelSpec(d=1, sigma=1.0, kernel=k, T=0.0, x0=[0.0], xT=[1.0])
        with pytest.raises(ValueError, match="x0 must be finite"):
            ModelSpec(d=1, sigma=1.0, kernel=k, T=1.0, x0=[np.inf], xT=[1.0])
        with pytest.raises(ValueError, match="length d"):
            ModelSpec(d=2, sigma=1.0, kernel=k, T=1.0, x0=[0.0], xT=[1.0, 2.0])

    def test_default_mu0_is_dirac_at_x0(self):
        s = spec_1d()
        assert s.mu0.kind == "dirac"
        assert np.array_equal(s.mu0.mean, s.x0)

    def test_from_dict_roundtrip(self):
        doc = {
            "d": 2, "sigma": 0.5, "T": 2.0, "x0": [0.0, 0.0], "xT": [1.0, -1.0],
            "kernel": {"family": "attract", "kappa": 2.0},
            "mu0": {"kind": "gaussian", "mean": [0.0, 0.0], "std": 0.1},
        }
        s = model_from_dict(doc)
        assert s.kernel.family == "attract"
        assert s.describe()["kernel"]["kappa"] == 2.0
        assert s.mu0.std == 0.1


class TestInitialLaw:
    def test_dirac_sampling(self):
        law = InitialLaw("dirac", [1.0, 2.0])
        out = law.sample(3, np.random.default_rng(0))
        assert np.array_equal(out, np.tile([1.0, 2.0], (3, 1)))

    def test_gaussian_sampling_stats(self):
        law = InitialLaw("gaussian", [5.0], std=0.5)
        out = law.sample(20000, np.random.default_rng(1))
        assert abs(out.mean() - 5.0) < 0.02
        assert abs(out.std() - 0.5) < 0.02


class TestMeanFieldOps:
    def test_drift_examples(self):
        att = make_kernel("attract", kappa=1.0)
        assert meanfield_drift(att, [0.0], EmpiricalMeasure.dirac([0.0])) == 0.0
        att2 = make_kernel("attract", kappa=2.0)
        assert meanfield_drift(att2, [1.0], EmpiricalMeasure.dirac([3.0])) == 4.0
        fac = make_kernel("factored_affine", a=0.0, b=1.0)
        mu = EmpiricalMeasure(np.array([[1.0], [3.0]]))
        # brute-force weighted sum: h(2) * mean = 2 * 2
        brute = sum(w * fac.eval([2.0], y) for w, y in zip(mu.weights, mu.samples))
        assert np.allclose(brute, [4.0])
        assert meanfield_drift(fac, [2.0], mu) == 4.0

    def test_drift_matches_weighted_sum_for_all_kernels(self):
        for kernel in all_kernels():
            mu = EmpiricalMeasure(RNG.standard_normal((7, 2)),
                                  np.full(7, 1 / 7))
            x = RNG.standard_normal(2)
            brute = sum(w * kernel.eval(x, y) for w, y in zip(mu.weights, mu.samples))
            assert np.allclose(meanfield_drift(kernel, x, mu), brute, atol=1e-12)

    def test_dirac_collapse(self):
        for kernel in all_kernels():
            x = RNG.standard_normal(2)
            y = RNG.standard_normal(2)
            assert np.array_equal(
                meanfield_drift(kernel, x, EmpiricalMeasure.dirac(y)),
                eval_kernel(kernel, x, y),
            )

    def test_divergence_examples(self):
        assert meanfield_divergence(make_kernel("zero"), [0.5], EmpiricalMeasure.dirac([0.0])) == 0.0
        att = make_kernel("attract", kappa=1.0)
        assert meanfield_divergence(att, [2.0], EmpiricalMeasure.dirac([-1.0])) == -1.0
        dw = make_kernel("local_plus_attract", kappa=0.0, local="doublewell", lam=1.0)
        assert meanfield_divergence(dw, [0.0], EmpiricalMeasure.dirac([0.0])) == 1.0


class TestParticleOps:
    def test_single_particle_fixed_point(self):
        att = make_kernel("attract", kappa=2.0)
        X = np.array([[0.7]])
        assert particle_drift(att, X) == 0.0

    def test_two_particle_example(self):
        att = make_kernel("attract", kappa=1.0)
        X = np.array([[0.0], [2.0]])
        assert np.array_equal(particle_drift(att, X), [[1.0], [-1.0]])

    def test_equal_rows_collapse(self):
        for kernel in all_kernels():
            x = RNG.standard_normal(2)
            X = np.tile(x, (5, 1))
            rows = particle_drift(kernel, X)
            expected = meanfield_drift(kernel, x, EmpiricalMeasure.dirac(x))
            assert np.allclose(rows, np.tile(expected, (5, 1)), atol=1e-14)

    def test_drift_matches_bruteforce(self):
        for kernel in all_kernels():
            X = RNG.standard_normal((6, 3))
            assert np.allclose(particle_drift(kernel, X),
                               particle_drift_bruteforce(kernel, X), atol=1e-12)

    def test_divergence_two_particle_attract(self):
        att = make_kernel("attract", kappa=1.0)
        X = RNG.standard_normal((2, 1))
        assert np.isclose(particle_divergence(att, X), -1.0)

    def test_divergence_is_flattened_jacobian_trace(self):
        for kernel in all_kernels():
            n, d = 4, 2
            X = RNG.standard_normal((n, d))

            def flat_field(v):
                return particle_drift_bruteforce(kernel, v.reshape(n, d)).ravel()

            jac = central_diff_jacobian(flat_field, X.ravel())
            assert abs(particle_divergence(kernel, X) - np.trace(jac)) < 1e-6
            assert np.isclose(particle_divergence(kernel, X),
                              particle_divergence_bruteforce(kernel, X), atol=1e-12)

    def test_field_jacobian_transpose_matches_fd(self):
        for kernel in all_kernels():
            n, d = 4, 2
            X = RNG.standard_normal((n, d))
            R = RNG.standard_normal((n, d))

            def flat_field(v):
                return particle_drift_bruteforce(kernel, v.reshape(n, d)).ravel()

            jac = central_diff_jacobian(flat_field, X.ravel())
            want = (jac.T @ R.ravel()).reshape(n, d)
            got = particle_field_jacobian_transpose(kernel, X, R)
            assert np.allclose(got, want, atol=1e-6)

    def test_divergence_gradient_matches_fd(self):
        for kernel in all_kernels():
            n, d = 4, 2
            X = RNG.standard_normal((n, d))

            def div_of(v):
                return particle_divergence_bruteforce(kernel, v.reshape(n, d))

            fd = central_diff_jacobian(lambda v: np.array([div_of(v)]), X.ravel())[0]
            got = particle_divergence_gradient(kernel, X).ravel()
            assert np.allclose(got, fd, atol=1e-6)
