"""Independent reference computations the implementation is checked against.

Each one is deliberately naive: exhaustive search or direct numerical
approximation, sharing no code with the package.
"""

from itertools import combinations

import numpy as np


def is_subsequence(sub, seq):
    it = iter(seq)
    return all(any(x == y for y in it) for x in sub)


def brute_lcs(a, b):
    """Longest common subsequence length by enumerating subsequences of a."""
    for k in range(len(a), 0, -1):
        if any(is_subsequence(c, b) for c in combinations(a, k)):
            return k
    return 0


def histogram_mode(values, lo, hi, n_bins=10):
    """Most populated fixed-width bin over [lo, hi], lowest index on ties."""
    counts, _ = np.histogram(values, bins=n_bins, range=(lo, hi))
    return int(np.flatnonzero(counts == counts.max())[0])


def numeric_grad(f, params, h=1e-6):
    """Central differences of scalar f with respect to each array in params."""
    grads = []
    for p in params:
        g = np.zeros_like(p)
        for idx in np.ndindex(p.shape):
            old = p[idx]
            p[idx] = old + h
            up = f()
            p[idx] = old - h
            down = f()
            p[idx] = old
            g[idx] = (up - down) / (2 * h)
        grads.append(g)
    return grads


def relative_error(a, b):
    a, b = np.ravel(a), np.ravel(b)
    scale = max(np.linalg.norm(a), np.linalg.norm(b), 1e-12)
    return float(np.linalg.norm(a - b) / scale)


def separated_classes(rng, n_per_class=200, n_features=4, gap=3.0):
    """Three Gaussian classes whose means differ by `gap` unit-variance stds."""
    x, y = [], []
    for k in range(3):
        x.append(rng.normal(loc=gap * k, scale=1.0, size=(n_per_class, n_features)))
        y += [k] * n_per_class
    return np.vstack(x), np.array(y)
