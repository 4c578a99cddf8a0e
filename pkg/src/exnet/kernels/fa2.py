"""One ForceAtlas2 iteration: force accumulation plus adaptive speed.

Force model: linear attraction along edges, repulsion scaling *
(deg_a+1)(deg_b+1)/distance, constant-magnitude gravity toward the origin,
and the global/local jitter-tolerance speed controller. `pos` and
`force_prev` are mutated in place; the updated (speed, speed_efficiency)
pair is returned for the caller's loop state.
"""

from __future__ import annotations

import numpy as np

from . import USE_NUMBA

MIN_SPEED_EFFICIENCY = 0.05
MAX_RISE = 0.5
MAX_JITTER = 10.0
MAX_SPEED = 1000.0
MIN_SPEED = 1e-12  # exactly zero would be absorbing: growth is multiplicative


def fa2_iteration_numpy(
    pos, force_prev, mass, edge_a, edge_b,
    scaling, gravity, jitter_tolerance, speed, speed_efficiency,
):
    n = pos.shape[0]
    force = np.zeros_like(pos)

    diff = pos[:, None, :] - pos[None, :, :]
    d2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    outer = mass[:, None] * mass[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        f = np.where(d2 > 0.0, scaling * outer / d2, 0.0)
    np.fill_diagonal(f, 0.0)
    force += (diff * f[..., None]).sum(axis=1)

    if gravity > 0.0:
        d = np.sqrt(pos[:, 0] ** 2 + pos[:, 1] ** 2)
        with np.errstate(divide="ignore", invalid="ignore"):
            gf = np.where(d > 0.0, mass * gravity / d, 0.0)
        force -= pos * gf[:, None]

    if edge_a.shape[0] > 0:
        dvec = pos[edge_a] - pos[edge_b]
        np.add.at(force, edge_a, -dvec)
        np.add.at(force, edge_b, dvec)

    swing = np.sqrt(
        (force[:, 0] - force_prev[:, 0]) ** 2 + (force[:, 1] - force_prev[:, 1]) ** 2
    )
    traction = 0.5 * np.sqrt(
        (force[:, 0] + force_prev[:, 0]) ** 2 + (force[:, 1] + force_prev[:, 1]) ** 2
    )
    total_swing = float(np.sum(mass * swing))
    total_traction = float(np.sum(mass * traction))

    force_prev[:] = force
    if total_swing <= 0.0 and total_traction <= 0.0:
        return speed, speed_efficiency  # no forces anywhere: nothing to move

    if total_swing <= 0.0:
        # static force field: unbounded target speed, capped rise per step
        if speed < MAX_SPEED:
            speed_efficiency *= 1.3
        speed = speed + MAX_RISE * speed
    else:
        est_jt = 0.05 * np.sqrt(n)
        jt = jitter_tolerance * max(
            np.sqrt(est_jt), min(MAX_JITTER, est_jt * total_traction / (n * n))
        )
        if total_swing > 2.0 * total_traction:
            if speed_efficiency > MIN_SPEED_EFFICIENCY:
                speed_efficiency *= 0.5
            jt = max(jt, jitter_tolerance)
        target_speed = jt * speed_efficiency * total_traction / total_swing
        if total_swing > jt * total_traction:
            if speed_efficiency > MIN_SPEED_EFFICIENCY:
                speed_efficiency *= 0.7
        elif speed < MAX_SPEED:
            speed_efficiency *= 1.3
        speed = speed + min(target_speed - speed, MAX_RISE * speed)
    if speed < MIN_SPEED:
        speed = MIN_SPEED

    factor = speed / (1.0 + np.sqrt(speed * swing))
    pos += force * factor[:, None]
    return speed, speed_efficiency


def _build_numba_iteration():
    import math

    from numba import njit

    @njit(cache=True)
    def fa2_iteration_numba(
        pos, force_prev, mass, edge_a, edge_b,
        scaling, gravity, jitter_tolerance, speed, speed_efficiency,
    ):
        n = pos.shape[0]
        fx = np.zeros(n, dtype=np.float64)
        fy = np.zeros(n, dtype=np.float64)

        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[i, 0] - pos[j, 0]
                dy = pos[i, 1] - pos[j, 1]
                d2 = dx * dx + dy * dy
                if d2 > 0.0:
                    f = scaling * mass[i] * mass[j] / d2
                    fx[i] += dx * f
                    fy[i] += dy * f
                    fx[j] -= dx * f
                    fy[j] -= dy * f

        if gravity > 0.0:
            for i in range(n):
                d = math.sqrt(pos[i, 0] ** 2 + pos[i, 1] ** 2)
                if d > 0.0:
                    gf = mass[i] * gravity / d
                    fx[i] -= pos[i, 0] * gf
                    fy[i] -= pos[i, 1] * gf

        for e in range(edge_a.shape[0]):
            a = edge_a[e]
            b = edge_b[e]
            dx = pos[a, 0] - pos[b, 0]
            dy = pos[a, 1] - pos[b, 1]
            fx[a] -= dx
            fy[a] -= dy
            fx[b] += dx
            fy[b] += dy

        total_swing = 0.0
        total_traction = 0.0
        for i in range(n):
            sw = math.sqrt((fx[i] - force_prev[i, 0]) ** 2 + (fy[i] - force_prev[i, 1]) ** 2)
            tr = 0.5 * math.sqrt((fx[i] + force_prev[i, 0]) ** 2 + (fy[i] + force_prev[i, 1]) ** 2)
            total_swing += mass[i] * sw
            total_traction += mass[i] * tr

        if total_swing <= 0.0 and total_traction <= 0.0:
            for i in range(n):
                force_prev[i, 0] = fx[i]
                force_prev[i, 1] = fy[i]
            return speed, speed_efficiency  # no forces anywhere: nothing to move

        if total_swing <= 0.0:
            # static force field: unbounded target speed, capped rise per step
            if speed < MAX_SPEED:
                speed_efficiency *= 1.3
            speed = speed + MAX_RISE * speed
        else:
            est_jt = 0.05 * math.sqrt(n)
            jt_bound = est_jt * total_traction / (n * n)
            if jt_bound > MAX_JITTER:
                jt_bound = MAX_JITTER
            jt_floor = math.sqrt(est_jt)
            jt = jitter_tolerance * (jt_floor if jt_floor > jt_bound else jt_bound)
            if total_swing > 2.0 * total_traction:
                if speed_efficiency > MIN_SPEED_EFFICIENCY:
                    speed_efficiency *= 0.5
                if jitter_tolerance > jt:
                    jt = jitter_tolerance
            target_speed = jt * speed_efficiency * total_traction / total_swing
            if total_swing > jt * total_traction:
                if speed_efficiency > MIN_SPEED_EFFICIENCY:
                    speed_efficiency *= 0.7
            elif speed < MAX_SPEED:
                speed_efficiency *= 1.3
            rise = target_speed - speed
            if rise > MAX_RISE * speed:
                rise = MAX_RISE * speed
            speed = speed + rise
        if speed < MIN_SPEED:
            speed = MIN_SPEED

        for i in range(n):
            sw = math.sqrt((fx[i] - force_prev[i, 0]) ** 2 + (fy[i] - force_prev[i, 1]) ** 2)
            factor = speed / (1.0 + math.sqrt(speed * sw))
            pos[i, 0] += fx[i] * factor
            pos[i, 1] += fy[i] * factor
            force_prev[i, 0] = fx[i]
            force_prev[i, 1] = fy[i]
        return speed, speed_efficiency

    return fa2_iteration_numba


if USE_NUMBA:
    fa2_iteration_numba = _build_numba_iteration()
    fa2_iteration = fa2_iteration_numba
else:
    fa2_iteration = fa2_iteration_numpy
