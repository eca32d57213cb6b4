import itertools

import numpy as np
import pytest
from conftest import EMPTY, SHIFT_X, SHIFT_Y, STABLE, diagrams, random_diagram
from hypothesis import given, settings

from pdmetric import GroundMetric, PersistenceDiagram
from pdmetric.oracle import (
    OracleSizeError,
    bijection_costs,
    brute_bottleneck,
    brute_profile_value,
    brute_prokhorov,
    brute_wasserstein,
    matching_costs,
)


def test_examples():
    assert brute_profile_value(SHIFT_X, SHIFT_Y, 1) == 4
    assert brute_bottleneck(SHIFT_X, SHIFT_Y) == 3.0
    assert brute_prokhorov(STABLE, EMPTY, "const:2") == 1.0
    assert brute_wasserstein(STABLE, EMPTY, 1) == 4.0


def _summaries(C, ts):
    # quantities every oracle function reads off the cost rows
    out = [C.max(axis=1).min() if C.shape[1] else 0.0]
    for p in (1, 2):
        out.append((C ** p).sum(axis=1).min() if C.shape[1] else 0.0)
    for t in ts:
        out.append((C > t).sum(axis=1).min() if C.shape[1] else 0)
    return out


@settings(max_examples=60, deadline=None)
@given(diagrams(3), diagrams(3))
def test_partial_injections_match_full_bijections(X, Y):
    full = bijection_costs(X, Y)
    fast = matching_costs(X, Y)
    ts = sorted(set(np.concatenate([full.ravel(), [0.0]]).tolist()))
    assert _summaries(full, ts) == _summaries(fast, ts)


def test_full_bijections_on_size_six(rng):
    m = GroundMetric(2)
    X, Y = random_diagram(rng, 3), random_diagram(rng, 3)
    full = bijection_costs(X, Y, m)
    assert len(full) == 720
    assert _summaries(full, [0.5, 1, 2, 4]) == _summaries(matching_costs(X, Y, m), [0.5, 1, 2, 4])


def test_permutation_invariance(rng):
    for _ in range(20):
        X, Y = random_diagram(rng, 4), random_diagram(rng, 4)
        Xp = PersistenceDiagram(list(reversed(X.points)))
        for t in (0.3, 1.0, 2.5):
            assert brute_profile_value(X, Y, t) == brute_profile_value(Xp, Y, t)
        assert brute_wasserstein(X, Y, 2) == pytest.approx(brute_wasserstein(Xp, Y, 2), rel=1e-12)


def test_size_cap():
    big = PersistenceDiagram([(0, k + 1) for k in range(6)])
    with pytest.raises(OracleSizeError):
        brute_profile_value(big, big, 1)


def test_rows_are_canonical_matchings():
    X = PersistenceDiagram([(0, 4), (0, 2)])
    Y = PersistenceDiagram([(1, 5)])
    # each x goes to y or the diagonal, y at most once: 1 + 2 = 3 rows
    assert len(matching_costs(X, Y)) == 3
    assert len(list(itertools.permutations(range(3)))) == len(bijection_costs(X, Y))
