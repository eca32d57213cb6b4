import pytest
from conftest import EMPTY, SHIFT_X, SHIFT_Y, SINGLE_A, SINGLE_B, STABLE, diagrams, random_diagram
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmetric import LINF, GroundMetric, PersistenceDiagram, candidate_distances, max_matching_size, maximum_matching
from pdmetric.matching import ThresholdMatcher
from pdmetric.oracle import brute_max_matching, threshold_edges

METRICS = [LINF, GroundMetric(1), GroundMetric(2)]


def brute_M(X, Y, t, m=LINF):
    return brute_max_matching(threshold_edges(X, Y, t, m))


@pytest.mark.parametrize(
    "X, Y, t, want",
    [(SHIFT_X, SHIFT_Y, 1, 4), (SHIFT_X, SHIFT_Y, 3, 8), (STABLE, EMPTY, 1, 1)],
)
def test_spec_examples(X, Y, t, want):
    assert brute_M(X, Y, t) == want  # oracle first
    assert max_matching_size(X, Y, t) == want


def test_negative_threshold_rejected():
    with pytest.raises(ValueError):
        max_matching_size(SINGLE_A, SINGLE_B, -0.1)


@pytest.mark.parametrize(
    "X, Y, want",
    [(SINGLE_A, SINGLE_B, [0, 1, 2]), (STABLE, EMPTY, [0, 1, 3]), (EMPTY, EMPTY, [0])],
)
def test_candidate_distances(X, Y, want):
    assert candidate_distances(X, Y).tolist() == want


def test_matching_result_is_valid_matching(rng):
    for _ in range(50):
        X, Y = random_diagram(rng, rng.randint(0, 8)), random_diagram(rng, rng.randint(0, 8))
        t = rng.uniform(0, 4)
        res = maximum_matching(X, Y, t)
        adj = threshold_edges(X, Y, t)
        lefts = [u for u, _ in res.pairs]
        rights = [v for _, v in res.pairs]
        assert len(set(lefts)) == len(lefts) and len(set(rights)) == len(rights)
        assert all(v in adj[u] for u, v in res.pairs)
        assert res.cardinality == brute_M(X, Y, t)
        assert res.unmatched == len(X) + len(Y) - res.cardinality


@settings(max_examples=300, deadline=None)
@given(diagrams(5), diagrams(5), st.integers(0, 40).map(lambda k: k / 8), st.sampled_from(METRICS))
def test_agrees_with_explicit_graph(X, Y, t, m):
    assert max_matching_size(X, Y, t, m) == brute_M(X, Y, t, m)


@settings(max_examples=100, deadline=None)
@given(diagrams(5), diagrams(5))
def test_monotone_and_saturating(X, Y):
    T = candidate_distances(X, Y).tolist()
    sizes = [max_matching_size(X, Y, t) for t in T]
    assert sizes == sorted(sizes)
    a, b = len(X.off_diagonal), len(Y.off_diagonal)
    assert sizes[0] >= min(a, b)
    assert sizes[-1] == a + b
    assert max_matching_size(X, Y, T[-1] * 2 + 1) == a + b
    for lo, hi, s in zip(T, T[1:], sizes):
        assert max_matching_size(X, Y, (lo + hi) / 2) == s


def test_incremental_engine_matches_fresh_solves(rng):
    for _ in range(30):
        X, Y = random_diagram(rng, 12), random_diagram(rng, 9)
        eng = ThresholdMatcher(X, Y)
        for t in sorted(rng.uniform(0, 5) for _ in range(8)):
            assert eng.solve(t) == max_matching_size(X, Y, t)
        with pytest.raises(ValueError):
            eng.solve(0.0)


def test_diagonal_points_are_ignored():
    X = PersistenceDiagram([(1, 1), (0, 4)])
    assert max_matching_size(X, SINGLE_B, 1) == max_matching_size(SINGLE_A, SINGLE_B, 1) == 2


def test_larger_random_instances_against_explicit_graph(rng):
    for _ in range(10):
        X, Y = random_diagram(rng, 60), random_diagram(rng, 45)
        for t in (0.0, 0.2, 0.7, 1.5):
            assert max_matching_size(X, Y, t) == brute_M(X, Y, t)


def test_duplicate_points_and_zero_threshold():
    X = PersistenceDiagram([(1, 3)] * 3)
    Y = PersistenceDiagram([(1, 3)] * 2)
    assert max_matching_size(X, Y, 0.0) == brute_M(X, Y, 0.0) == 4
