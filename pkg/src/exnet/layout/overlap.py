"""Pairwise overlap removal after layout."""

from __future__ import annotations

from typing import Mapping

import numpy as np


def remove_overlaps(
    positions: Mapping[str, tuple[float, float]],
    radii: Mapping[str, float],
    margin: float = 2.0,
    seed: int = 0,
    max_passes: int = 200,
) -> tuple[dict[str, tuple[float, float]], bool]:
    """Separate circles until no pair is closer than r_a + r_b + margin.

    Deterministic Gauss-Seidel sweeps in inst_id order: each violating pair
    is pushed apart symmetrically along its center line (coincident centers
    get a seeded direction). Returns (positions, resolved); `resolved` is
    False when the pass cap was hit and the output is best-effort.
    """
    ids = sorted(positions)
    for iid in ids:
        if radii[iid] <= 0:
            raise ValueError(f"radius must be positive for {iid}")
    n = len(ids)
    pos = np.array([positions[i] for i in ids], dtype=np.float64)
    rad = np.array([radii[i] for i in ids], dtype=np.float64)
    rng = np.random.default_rng([seed, 0x09E])

    resolved = n < 2
    for _ in range(max_passes):
        if n < 2:
            break
        moved = False
        for i in range(n):
            for j in range(i + 1, n):
                dx = pos[j, 0] - pos[i, 0]
                dy = pos[j, 1] - pos[i, 1]
                d = float(np.hypot(dx, dy))
                need = rad[i] + rad[j] + margin
                if d >= need:
                    continue
                moved = True
                if d == 0.0:
                    angle = rng.uniform(0.0, 2.0 * np.pi)
                    ux, uy = np.cos(angle), np.sin(angle)
                else:
                    ux, uy = dx / d, dy / d
                # push to slightly beyond the bound so rounding cannot re-violate
                shift = 0.5 * (need * (1.0 + 1e-9) - d)
                pos[i, 0] -= ux * shift
                pos[i, 1] -= uy * shift
                pos[j, 0] += ux * shift
                pos[j, 1] += uy * shift
        if not moved:
            resolved = True
            break
    return {iid: (float(pos[k, 0]), float(pos[k, 1])) for k, iid in enumerate(ids)}, resolved
