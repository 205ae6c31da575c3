"""Shared independent oracles: finite differences and small helpers.

These stay deliberately dumb; they never call the analytic code paths they
are used to check.
"""

import numpy as np


def central_diff_jacobian(f, x, h=1e-6):
    """Dense Jacobian of f: R^n -> R^m by central differences."""
    x = np.asarray(x, dtype=float)
    f0 = np.atleast_1d(np.asarray(f(x), dtype=float))
    jac = np.zeros((f0.size, x.size))
    for j in range(x.size):
        step = h * (1.0 + abs(x.flat[j]))
        xp = x.copy()
        xm = x.copy()
        xp.flat[j] += step
        xm.flat[j] -= step
        jac[:, j] = (np.asarray(f(xp), dtype=float).ravel()
                     - np.asarray(f(xm), dtype=float).ravel()) / (2 * step)
    return jac


def central_diff_gradient(f, x, h=1e-6):
    """Gradient of scalar f by central differences, shaped like x."""
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for j in range(x.size):
        step = h * (1.0 + abs(x.flat[j]))
        xp = x.copy()
        xm = x.copy()
        xp.flat[j] += step
        xm.flat[j] -= step
        g.flat[j] = (f(xp) - f(xm)) / (2 * step)
    return g


def rk4_ode(rhs, y0, t0, t1, steps):
    """Plain fixed-step RK4 integrator, independent of the package's own."""
    y = np.asarray(y0, dtype=float).copy()
    h = (t1 - t0) / steps
    t = t0
    for _ in range(steps):
        k1 = rhs(t, y)
        k2 = rhs(t + h / 2, y + h / 2 * k1)
        k3 = rhs(t + h / 2, y + h / 2 * k2)
        k4 = rhs(t + h, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h
    return y


def fit_loglog_slope(xs, ys):
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.asarray(ys, dtype=float))
    return float(np.polyfit(lx, ly, 1)[0])
