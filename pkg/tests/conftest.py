import numpy as np
import pytest

from exnet.corpus import CollabEdge, Institution, SubjectAreaDataset, Thresholds


def make_dataset(edges, subject="Subj", institutions=None):
    """Dataset from (ref, net, n, y) tuples; institutions inferred when omitted."""
    collab = [CollabEdge(r, n_, int(n), int(y)) for r, n_, n, y in edges]
    refs = {e.ref_id for e in collab}
    ids = refs | {e.net_id for e in collab}
    if institutions is None:
        institutions = {
            iid: Institution(inst_id=iid, name=f"Inst {iid}", country="USA",
                             lat=10.0, lon=20.0, is_reference=iid in refs,
                             total_papers=600)
            for iid in sorted(ids)
        }
    return SubjectAreaDataset(
        subject=subject,
        edges=sorted(collab, key=lambda e: (e.ref_id, e.net_id)),
        institutions=institutions,
        thresholds_applied=Thresholds(),
    )


@pytest.fixture
def tiny_dataset():
    return make_dataset(
        [
            ("A", "X", 40, 10),
            ("A", "Y", 25, 5),
            ("B", "X", 30, 9),
            ("B", "Z", 12, 2),
            ("C", "Y", 18, 6),
        ]
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
