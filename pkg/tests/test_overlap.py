import math

import pytest

from exnet.layout import remove_overlaps


def no_violations(positions, radii, margin):
    ids = sorted(positions)
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            need = radii[a] + radii[b] + margin
            if math.dist(positions[a], positions[b]) < need:
                return False
    return True


class TestRemoveOverlaps:
    def test_valid_input_untouched(self):
        pos = {"a": (0.0, 0.0), "b": (100.0, 0.0)}
        radii = {"a": 3.0, "b": 3.0}
        out, resolved = remove_overlaps(pos, radii, margin=2.0)
        assert resolved
        assert out == pos

    def test_coincident_nodes_separated(self):
        pos = {"a": (5.0, 5.0), "b": (5.0, 5.0)}
        radii = {"a": 2.0, "b": 3.0}
        out, resolved = remove_overlaps(pos, radii, margin=1.0, seed=4)
        assert resolved
        assert math.dist(out["a"], out["b"]) >= 6.0

    def test_coincident_direction_seeded(self):
        pos = {"a": (0.0, 0.0), "b": (0.0, 0.0)}
        radii = {"a": 1.0, "b": 1.0}
        out1, _ = remove_overlaps(pos, radii, margin=0.5, seed=11)
        out2, _ = remove_overlaps(pos, radii, margin=0.5, seed=11)
        out3, _ = remove_overlaps(pos, radii, margin=0.5, seed=12)
        assert out1 == out2
        assert out1 != out3

    def test_fifty_node_cluster_exhaustive_post_check(self, rng):
        pos = {f"n{i:02d}": (float(rng.normal(0, 5)), float(rng.normal(0, 5)))
               for i in range(50)}
        radii = {k: float(rng.uniform(1.0, 4.0)) for k in pos}
        out, resolved = remove_overlaps(pos, radii, margin=2.0, seed=1)
        assert resolved
        assert no_violations(out, radii, 2.0)

    def test_pass_cap_reports_best_effort(self, rng):
        pos = {f"n{i}": (float(rng.normal(0, 0.1)), float(rng.normal(0, 0.1)))
               for i in range(40)}
        radii = {k: 5.0 for k in pos}
        out, resolved = remove_overlaps(pos, radii, margin=2.0, seed=1, max_passes=1)
        assert not resolved
        assert len(out) == 40

    def test_nonpositive_radius_rejected(self):
        with pytest.raises(ValueError):
            remove_overlaps({"a": (0.0, 0.0)}, {"a": 0.0})

    def test_deterministic_given_input_order(self, rng):
        # same content, different dict insertion order: output identical
        items = [(f"n{i}", (float(rng.normal()), float(rng.normal()))) for i in range(20)]
        radii = {k: 2.0 for k, _ in items}
        out1, _ = remove_overlaps(dict(items), radii, margin=1.0, seed=2)
        out2, _ = remove_overlaps(dict(reversed(items)), radii, margin=1.0, seed=2)
        assert out1 == out2
