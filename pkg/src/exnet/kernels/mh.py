"""One Metropolis-Hastings sweep over all parameter blocks.

The sweep consumes pre-drawn standard normals `z` and log-uniforms `lunif`
(one pair per proposal, in block order: every edge effect, every reference
effect, intercept, within variance, between variance), so the random stream
is owned by the caller and identical for both backends.

Blocks use Gaussian random walks; the two variance components use a random
walk on the log scale with the Jacobian correction folded into the accept
ratio. State arrays (`u`, `sp_u`, `tau`, `scalars`) and acceptance counters
are mutated in place.
"""

from __future__ import annotations

import numpy as np

from ..numerics import softplus
from . import USE_NUMBA

PRIOR_VAR = 1000.0


def mh_sweep_numpy(
    u, sp_u, tau, scalars,
    y, n, ref_of_edge, edge_start, edge_count,
    z, lunif,
    scale_u, scale_tau, scale_scalars,
    acc_u, acc_tau, acc_scalars,
):
    n_edges = u.shape[0]
    n_refs = tau.shape[0]
    beta0 = scalars[0]
    s2u = scalars[1]
    s2t = scalars[2]

    # edge-level effects: binomial likelihood + level-2 normal
    up = u + scale_u * z[:n_edges]
    sp_up = softplus(up)
    t_e = tau[ref_of_edge]
    delta = (y * up - n * sp_up) - (y * u - n * sp_u)
    delta += ((u - t_e) ** 2 - (up - t_e) ** 2) / (2.0 * s2u)
    acc = lunif[:n_edges] < delta
    u[acc] = up[acc]
    sp_u[acc] = sp_up[acc]
    acc_u += acc

    # reference-level effects: level-2 group sums + level-3 normal
    s1 = np.add.reduceat(u, edge_start[:-1])
    tp = tau + scale_tau * z[n_edges:n_edges + n_refs]
    delta = (2.0 * s1 * (tp - tau) - edge_count * (tp * tp - tau * tau)) / (2.0 * s2u)
    delta += ((tau - beta0) ** 2 - (tp - beta0) ** 2) / (2.0 * s2t)
    acc = lunif[n_edges:n_edges + n_refs] < delta
    tau[acc] = tp[acc]
    acc_tau += acc

    # intercept
    t1 = float(np.sum(tau))
    bp = beta0 + scale_scalars[0] * z[n_edges + n_refs]
    delta = (2.0 * t1 * (bp - beta0) - n_refs * (bp * bp - beta0 * beta0)) / (2.0 * s2t)
    delta += (beta0 * beta0 - bp * bp) / (2.0 * PRIOR_VAR)
    if lunif[n_edges + n_refs] < delta:
        scalars[0] = bp
        acc_scalars[0] += 1
        beta0 = bp

    # within variance (log-scale walk)
    resid = u - tau[ref_of_edge]
    sse_u = float(resid @ resid)
    lv = np.log(s2u)
    lvp = lv + scale_scalars[1] * z[n_edges + n_refs + 1]
    vp = np.exp(lvp)
    delta = (
        -(n_edges / 2.0) * (lvp - lv)
        - sse_u * (0.5 / vp - 0.5 / s2u)
        - (vp * vp - s2u * s2u) / (2.0 * PRIOR_VAR)
        + (lvp - lv)
    )
    if lunif[n_edges + n_refs + 1] < delta:
        scalars[1] = vp
        acc_scalars[1] += 1

    # between variance (log-scale walk)
    rt = tau - beta0
    sse_t = float(rt @ rt)
    lv = np.log(s2t)
    lvp = lv + scale_scalars[2] * z[n_edges + n_refs + 2]
    vp = np.exp(lvp)
    delta = (
        -(n_refs / 2.0) * (lvp - lv)
        - sse_t * (0.5 / vp - 0.5 / s2t)
        - (vp * vp - s2t * s2t) / (2.0 * PRIOR_VAR)
        + (lvp - lv)
    )
    if lunif[n_edges + n_refs + 2] < delta:
        scalars[2] = vp
        acc_scalars[2] += 1


def _build_numba_sweep():
    import math

    from numba import njit

    @njit(cache=True)
    def _softplus(x):
        if x > 0.0:
            return x + math.log1p(math.exp(-x))
        return math.log1p(math.exp(x))

    @njit(cache=True)
    def mh_sweep_numba(
        u, sp_u, tau, scalars,
        y, n, ref_of_edge, edge_start, edge_count,
        z, lunif,
        scale_u, scale_tau, scale_scalars,
        acc_u, acc_tau, acc_scalars,
    ):
        n_edges = u.shape[0]
        n_refs = tau.shape[0]
        beta0 = scalars[0]
        s2u = scalars[1]
        s2t = scalars[2]

        for e in range(n_edges):
            t_e = tau[ref_of_edge[e]]
            ue = u[e]
            up = ue + scale_u[e] * z[e]
            sp_up = _softplus(up)
            delta = (y[e] * up - n[e] * sp_up) - (y[e] * ue - n[e] * sp_u[e])
            delta += ((ue - t_e) ** 2 - (up - t_e) ** 2) / (2.0 * s2u)
            if lunif[e] < delta:
                u[e] = up
                sp_u[e] = sp_up
                acc_u[e] += 1

        for r in range(n_refs):
            s1 = 0.0
            for e in range(edge_start[r], edge_start[r + 1]):
                s1 += u[e]
            t = tau[r]
            tp = t + scale_tau[r] * z[n_edges + r]
            delta = (2.0 * s1 * (tp - t) - edge_count[r] * (tp * tp - t * t)) / (2.0 * s2u)
            delta += ((t - beta0) ** 2 - (tp - beta0) ** 2) / (2.0 * s2t)
            if lunif[n_edges + r] < delta:
                tau[r] = tp
                acc_tau[r] += 1

        t1 = 0.0
        for r in range(n_refs):
            t1 += tau[r]
        bp = beta0 + scale_scalars[0] * z[n_edges + n_refs]
        delta = (2.0 * t1 * (bp - beta0) - n_refs * (bp * bp - beta0 * beta0)) / (2.0 * s2t)
        delta += (beta0 * beta0 - bp * bp) / (2.0 * PRIOR_VAR)
        if lunif[n_edges + n_refs] < delta:
            scalars[0] = bp
            acc_scalars[0] += 1
            beta0 = bp

        sse_u = 0.0
        for e in range(n_edges):
            d = u[e] - tau[ref_of_edge[e]]
            sse_u += d * d
        lv = math.log(s2u)
        lvp = lv + scale_scalars[1] * z[n_edges + n_refs + 1]
        vp = math.exp(lvp)
        delta = (
            -(n_edges / 2.0) * (lvp - lv)
            - sse_u * (0.5 / vp - 0.5 / s2u)
            - (vp * vp - s2u * s2u) / (2.0 * PRIOR_VAR)
            + (lvp - lv)
        )
        if lunif[n_edges + n_refs + 1] < delta:
            scalars[1] = vp
            acc_scalars[1] += 1

        sse_t = 0.0
        for r in range(n_refs):
            d = tau[r] - beta0
            sse_t += d * d
        lv = math.log(s2t)
        lvp = lv + scale_scalars[2] * z[n_edges + n_refs + 2]
        vp = math.exp(lvp)
        delta = (
            -(n_refs / 2.0) * (lvp - lv)
            - sse_t * (0.5 / vp - 0.5 / s2t)
            - (vp * vp - s2t * s2t) / (2.0 * PRIOR_VAR)
            + (lvp - lv)
        )
        if lunif[n_edges + n_refs + 2] < delta:
            scalars[2] = vp
            acc_scalars[2] += 1

    return mh_sweep_numba


if USE_NUMBA:
    mh_sweep_numba = _build_numba_sweep()
    mh_sweep = mh_sweep_numba
else:
    mh_sweep = mh_sweep_numpy
