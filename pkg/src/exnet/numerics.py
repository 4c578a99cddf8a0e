"""Stable scalar/array transforms shared across modules."""

from __future__ import annotations

import math

import numpy as np


def softplus(x):
    """log(1 + exp(x)), overflow-safe, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x > 0
    out[pos] = x[pos] + np.log1p(np.exp(-x[pos]))
    out[~pos] = np.log1p(np.exp(x[~pos]))
    return out


def inv_logit(x):
    """logistic(x) = 1 / (1 + exp(-x)), overflow-safe, elementwise."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def logit(p):
    p = np.asarray(p, dtype=np.float64)
    return np.log(p) - np.log1p(-p)


def log_binom_coeff(n, y):
    """log C(n, y) elementwise via lgamma."""
    n = np.atleast_1d(np.asarray(n, dtype=np.float64))
    y = np.atleast_1d(np.asarray(y, dtype=np.float64))
    n, y = np.broadcast_arrays(n, y)
    out = np.empty(n.shape, dtype=np.float64)
    flat_n, flat_y, flat_o = n.ravel(), y.ravel(), out.ravel()
    for i in range(flat_n.size):
        flat_o[i] = (
            math.lgamma(flat_n[i] + 1.0)
            - math.lgamma(flat_y[i] + 1.0)
            - math.lgamma(flat_n[i] - flat_y[i] + 1.0)
        )
    return out
