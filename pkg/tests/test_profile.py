import json

import pytest
from conftest import EMPTY, SHIFT_X, SHIFT_Y, SINGLE_A, SINGLE_B, STABLE, diagrams, random_diagram
from hypothesis import given, settings
from hypothesis import strategies as st

from pdmetric import (
    LINF,
    BottleneckProfile,
    GroundMetric,
    PersistenceDiagram,
    bottleneck_distance,
    candidate_distances,
    full_profile,
    profile_query,
    profile_value,
    wasserstein_distance,
)
from pdmetric.oracle import brute_profile_value

half = st.integers(0, 48).map(lambda k: k / 4)


@pytest.mark.parametrize(
    "X, Y, t, want",
    [
        (SINGLE_A, SINGLE_B, 0.5, 1),
        (SINGLE_A, SINGLE_B, 2, 0),
        (SHIFT_X, SHIFT_Y, 1, 4),
        (STABLE, EMPTY, 1, 1),
    ],
)
def test_profile_value_examples(X, Y, t, want):
    assert brute_profile_value(X, Y, t) == want
    assert profile_value(X, Y, t) == want


def test_negative_t():
    with pytest.raises(ValueError):
        profile_value(SINGLE_A, SINGLE_B, -1)


@pytest.mark.parametrize(
    "X, Y, steps",
    [
        (STABLE, EMPTY, ((0.0, 2), (1.0, 1), (3.0, 0))),
        (SHIFT_X, SHIFT_Y, ((0.0, 4), (3.0, 0))),
        (SINGLE_A, SINGLE_A, ((0.0, 0),)),
    ],
)
def test_full_profile_examples(X, Y, steps):
    assert full_profile(X, Y).steps == steps


def test_staircase_fixture_matches_oracle():
    # shifts 3, 2, 1, 0 of the four points
    Z = PersistenceDiagram([(0, 10), (0, 21), (0, 32), (0, 43)])
    P = full_profile(SHIFT_X, Z)
    for t in candidate_distances(SHIFT_X, Z).tolist() + [0.5, 1.5, 2.5, 3.5]:
        assert P(t) == brute_profile_value(SHIFT_X, Z, t)
    assert P.bottleneck == 3.0


def test_profile_query_interval_semantics():
    P = BottleneckProfile(((0.0, 2), (1.0, 1), (3.0, 0)), 2, 0)
    assert profile_query(P, 0.99) == 2
    assert profile_query(P, 1) == 1
    assert profile_query(P, 100) == 0
    assert profile_query(P, 0) == 2


@pytest.mark.parametrize(
    "steps",
    [((1.0, 1), (2.0, 0)), ((0.0, 1), (0.0, 0)), ((0.0, 1), (1.0, 1), (2.0, 0)), ((0.0, 2), (1.0, 1))],
)
def test_profile_invariants_enforced(steps):
    with pytest.raises(ValueError):
        BottleneckProfile(steps, 2, 0)


def test_serialization_round_trip():
    P = full_profile(STABLE, EMPTY, GroundMetric(2))
    doc = json.loads(P.to_json())
    assert doc["ground_order"] == "2" and doc["n_x"] == 2 and doc["n_y"] == 0
    assert BottleneckProfile.from_dict(doc) == P
    assert P.to_csv().splitlines()[0] == "t,value"


@settings(max_examples=150, deadline=None)
@given(diagrams(5), diagrams(5), st.sampled_from([LINF, GroundMetric(1), GroundMetric(2)]))
def test_full_profile_agrees_with_pointwise_and_oracle(X, Y, m):
    P = full_profile(X, Y, m)
    T = candidate_distances(X, Y, m).tolist()
    probes = T + [(a + b) / 2 for a, b in zip(T, T[1:])] + [T[-1] + 1]
    for t in probes:
        assert P(t) == profile_value(X, Y, t, m) == brute_profile_value(X, Y, t, m)


@settings(max_examples=150, deadline=None)
@given(diagrams(4), diagrams(4), half, half)
def test_monotone_and_symmetric(X, Y, s, t):
    s, t = min(s, t), max(s, t)
    assert profile_value(X, Y, s) >= profile_value(X, Y, t)
    assert profile_value(X, Y, t) == profile_value(Y, X, t)


@settings(max_examples=150, deadline=None)
@given(diagrams(4), diagrams(4), st.floats(0.001, 20))
def test_vanishes_beyond_bottleneck(X, Y, eps):
    assert profile_value(X, Y, bottleneck_distance(X, Y) + eps) == 0


@settings(max_examples=150, deadline=None)
@given(diagrams(4), diagrams(4), diagrams(4), half, half)
def test_scaled_triangle(X, Y, Z, s, t):
    assert profile_value(X, Z, s + t) <= profile_value(X, Y, s) + profile_value(Y, Z, t)


@settings(max_examples=150, deadline=None)
@given(diagrams(4), diagrams(4), st.floats(0.01, 20), st.sampled_from([1, 2]))
def test_chebyshev_bound(X, Y, t, p):
    assert profile_value(X, Y, t) <= wasserstein_distance(X, Y, p) ** p / t ** p + 1e-9


def test_stable_rank_closed_form(rng):
    for _ in range(50):
        X = random_diagram(rng, rng.randint(0, 10))
        for _ in range(10):
            t = rng.uniform(0, 6)
            assert profile_value(X, EMPTY, t) == sum(1 for b, d in X.points if b + 2 * t < d)


@settings(max_examples=100, deadline=None)
@given(diagrams(6), st.floats(1e-6, 50))
def test_identity(X, t):
    assert profile_value(X, X, t) == 0
