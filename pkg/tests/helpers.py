"""Independent checks used across the test modules.

Nothing here calls into the solver internals: bounds are re-derived from the
trace with plain floats.
"""

import numpy as np


def central_difference(f, x, h=1e-6):
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (f(x + e) - f(x - e)) / (2 * h)
    return g


def decrease_violations(trace, rtol=1e-12):
    """Accepted steps whose decrease is worse than -(1/2L)((1-2a)/(1-a))^2 |g|^2.

    ``rtol`` absorbs rounding between the acceptance test and this
    algebraically equal form of it.
    """
    values = trace.values()
    bad = []
    for rec in trace.records:
        f_curr, f_next = values[rec.k], values[rec.k + 1]
        a, L, gn = rec.alpha_k, rec.L_k, rec.noisy_grad_norm
        bound = -(1.0 / (2.0 * L)) * ((1 - 2 * a) ** 2 / (1 - a) ** 2) * gn * gn
        scale = abs(f_curr) + abs(f_next) + gn * gn / L
        if f_next - f_curr > bound + rtol * scale:
            bad.append(rec.k)
    return bad


def random_quadratic(rng, n=5):
    """Diagonal quadratic with mu in [0.01, 1] and L in [mu, 100 mu]."""
    mu = rng.uniform(0.01, 1.0)
    L = rng.uniform(mu, 100 * mu)
    eig = np.concatenate([[mu, L], rng.uniform(mu, L, n - 2)])
    rng.shuffle(eig)
    return eig, mu, L

