"""Objective functions, vectorised over rows.

Every function takes an ``(n, D)`` array and returns an ``(n,)`` array.
"""
import math

import numpy as np

from .data import kowalik_table, meyer_roth_table


def step(X):
    return np.sum(np.floor(X + 0.5) ** 2, axis=1)


def colville(X):
    x1, x2, x3, x4 = X.T
    return (100 * (x2 - x1**2) ** 2 + (1 - x1) ** 2
            + 90 * (x4 - x3**2) ** 2 + (1 - x3) ** 2
            + 10.1 * ((x2 - 1) ** 2 + (x4 - 1) ** 2)
            + 19.8 * (x2 - 1) * (x4 - 1))


def kowalik(X):
    a, b = kowalik_table()
    x1, x2, x3, x4 = (X[:, k:k + 1] for k in range(4))
    with np.errstate(divide="ignore", invalid="ignore"):
        model = x1 * (b**2 + b * x2) / (b**2 + b * x3 + x4)
    return np.sum((a - model) ** 2, axis=1)


def make_shifted_rosenbrock(shift, bias=390.0):
    shift = np.asarray(shift, dtype=float)

    def shifted_rosenbrock(X):
        z = X - shift + 1.0
        head, tail = z[:, :-1], z[:, 1:]
        return np.sum(100.0 * (head**2 - tail) ** 2 + (head - 1.0) ** 2, axis=1) + bias

    return shifted_rosenbrock


def six_hump_camel(X):
    x1, x2 = X.T
    return ((4 - 2.1 * x1**2 + x1**4 / 3) * x1**2 + x1 * x2
            + (-4 + 4 * x2**2) * x2**2)


def hosaki(X):
    x1, x2 = X.T
    poly = 1 - 8 * x1 + 7 * x1**2 - 7.0 / 3.0 * x1**3 + 0.25 * x1**4
    return poly * x2**2 * np.exp(-x2)


def meyer_roth(X):
    t, v, y = meyer_roth_table()
    x1, x2, x3 = (X[:, k:k + 1] for k in range(3))
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.sum((x1 * x3 * t / (1 + x1 * t + x2 * v) - y) ** 2, axis=1)


_SHUBERT_I = np.arange(1, 6, dtype=float)


def shubert(X):
    i = _SHUBERT_I
    s1 = np.sum(i * np.cos((i + 1) * X[:, 0:1] + i), axis=1)
    s2 = np.sum(i * np.cos((i + 1) * X[:, 1:2] + i), axis=1)
    return s1 * s2


def pressure_vessel_cost(X):
    x1, x2, x3, x4 = X.T
    return (0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3**2
            + 3.1611 * x1**2 * x4 + 19.84 * x1**2 * x3)


def pressure_vessel_constraints(X):
    """Constraint values ``g_k(x)``, feasible where ``<= 0``; shape ``(n, 3)``."""
    x1, x2, x3, x4 = X.T
    g1 = 0.0193 * x3 - x1
    g2 = 0.00954 * x3 - x2
    g3 = 750.0 * 1728.0 - math.pi * x3**2 * (x4 + 4.0 / 3.0 * x3)
    return np.stack([g1, g2, g3], axis=1)


LJ_MIN_DISTANCE = 1e-6
LJ_CAP = 1e12


def lennard_jones(X):
    """Cluster energy with pair term ``r**-12 - 2 r**-6`` (pair minimum -1 at r = 1)."""
    n, d = X.shape
    if d % 3:
        raise ValueError("Lennard-Jones dimension must be a multiple of 3")
    atoms = X.reshape(n, d // 3, 3)
    p, q = np.triu_indices(d // 3, k=1)
    diff = atoms[:, p, :] - atoms[:, q, :]
    # explicit component sum keeps each row's result independent of batch size
    r2 = diff[..., 0] ** 2 + diff[..., 1] ** 2 + diff[..., 2] ** 2
    close = np.any(r2 < LJ_MIN_DISTANCE**2, axis=1)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inv6 = 1.0 / r2**3
        terms = inv6 * inv6 - 2.0 * inv6
    # left-to-right over pairs; np.sum's order here depends on the batch shape
    energy = terms[:, 0].copy()
    for k in range(1, terms.shape[1]):
        energy += terms[:, k]
    return np.where(close, LJ_CAP, energy)


FM_THETA = 2.0 * math.pi / 100.0
FM_TARGET = (1.0, 5.0, -1.5, 4.8, 2.0, 4.9)
_FM_T = np.arange(101, dtype=float) * FM_THETA


def fm_wave(params, t=_FM_T):
    """Sound wave ``y(t)`` for each row of ``(a1, w1, a2, w2, a3, w3)``."""
    a1, w1, a2, w2, a3, w3 = (params[:, k:k + 1] for k in range(6))
    return a1 * np.sin(w1 * t + a2 * np.sin(w2 * t + a3 * np.sin(w3 * t)))


_FM_Y0 = fm_wave(np.array([FM_TARGET]))[0]


def fm_sound_wave(X):
    return np.sum((fm_wave(X) - _FM_Y0) ** 2, axis=1)
