"""ForceAtlas2 layout driven from deterministic geographic initialization.

Linear attraction, degree-weighted repulsion, plain gravity and the
adaptive jitter-tolerance speed controller; a fixed iteration count is the
stop rule so the result is a pure function of (graph, init, config).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from ..kernels import fa2 as fa2_kernels
from ..netstats import Graph


@dataclass(frozen=True)
class LayoutConfig:
    iterations: int = 1000
    scaling: float = 2.0
    gravity: float = 1.0
    jitter_tolerance: float = 1.0
    overlap_margin: float = 2.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.scaling <= 0 or self.jitter_tolerance <= 0:
            raise ValueError("scaling and jitter_tolerance must be positive")
        if self.gravity < 0 or self.overlap_margin < 0:
            raise ValueError("gravity and overlap_margin must be >= 0")


def _perturb_coincident(pos: np.ndarray, seed: int) -> None:
    """Separate exactly coincident start positions with a tiny seeded offset."""
    seen: dict[tuple[float, float], int] = {}
    rng = np.random.default_rng([seed, 0xC01])
    extent = 1.0 + float(np.abs(pos).max()) if pos.size else 1.0
    eps = 1e-5 * extent
    for i in range(pos.shape[0]):
        key = (float(pos[i, 0]), float(pos[i, 1]))
        if key in seen:
            angle = rng.uniform(0.0, 2.0 * np.pi)
            pos[i, 0] += eps * np.cos(angle)
            pos[i, 1] += eps * np.sin(angle)
        else:
            seen[key] = i


def fa2_layout(
    g: Graph,
    init: Mapping[str, tuple[float, float]],
    config: LayoutConfig = LayoutConfig(),
) -> dict[str, tuple[float, float]]:
    """Run the force simulation for config.iterations steps."""
    missing = [v for v in g.nodes if v not in init]
    if missing:
        raise ValueError(f"initial positions missing for: {missing[:5]}")
    if g.n_nodes == 0:
        return {}

    idx = g.index()
    pos = np.array([init[v] for v in g.nodes], dtype=np.float64)
    _perturb_coincident(pos, config.seed)

    deg = g.degrees()
    mass = np.array([deg[v] + 1.0 for v in g.nodes], dtype=np.float64)
    edge_a = np.array([idx[a] for a, _ in g.edges], dtype=np.int64)
    edge_b = np.array([idx[b] for _, b in g.edges], dtype=np.int64)

    force_prev = np.zeros_like(pos)
    speed, speed_efficiency = 1.0, 1.0
    step = fa2_kernels.fa2_iteration
    for _ in range(config.iterations):
        speed, speed_efficiency = step(
            pos, force_prev, mass, edge_a, edge_b,
            config.scaling, config.gravity, config.jitter_tolerance,
            speed, speed_efficiency,
        )
    return {v: (float(pos[i, 0]), float(pos[i, 1])) for v, i in idx.items()}
