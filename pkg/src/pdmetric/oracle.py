"""Exhaustive ground truth on small diagrams.

Nothing here touches the matching engine or the assignment solver. Only
the candidate set and the search predicate are shared with the fast path.

Two enumerations are provided. :func:`iter_bijections` walks all |U|!
bijections between the augmented point lists; :func:`matching_costs`
walks partial injections X0 -> Y0 (everything unmatched goes to its own
projection). Every bijection is dominated pairwise by the canonical one
with the same X0-Y0 pairs, so both give the same minima; the second is
thousands of times smaller and is what the brute-force functions use.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .diagram import LINF, GroundMetric, PersistenceDiagram, project_to_diagonal
from .prokhorov import _as_param, prokhorov_candidates, reaches

__all__ = [
    "MAX_POINTS",
    "OracleSizeError",
    "iter_bijections",
    "bijection_costs",
    "matching_costs",
    "brute_profile_value",
    "brute_prokhorov",
    "brute_wasserstein",
    "brute_bottleneck",
    "threshold_edges",
    "brute_max_matching",
]

MAX_POINTS = 10


class OracleSizeError(ValueError):
    pass


def _sides(X, Y):
    xs = X.off_diagonal
    ys = Y.off_diagonal
    if len(xs) + len(ys) > MAX_POINTS:
        raise OracleSizeError(
            f"oracle is capped at {MAX_POINTS} off-diagonal points in total, got {len(xs) + len(ys)}"
        )
    return xs, ys


def _augmented(X, Y):
    xs, ys = _sides(X, Y)
    U = [("pt", x) for x in xs] + [("diag", project_to_diagonal(y)) for y in ys]
    V = [("pt", y) for y in ys] + [("diag", project_to_diagonal(x)) for x in xs]
    return U, V


def _pair_cost(u, v, m):
    (ku, pu), (kv, pv) = u, v
    if ku == "diag" and kv == "diag":
        return 0.0
    if ku == "diag" or kv == "diag":
        diag, pt = (pu, pv) if ku == "diag" else (pv, pu)
        # own projection: the closed form used everywhere else
        if project_to_diagonal(pt) == diag:
            return m.diagonal_distance(pt)
        return m.distance(pt, diag)
    return m.distance(pu, pv)


def iter_bijections(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF):
    """Yield the distance tuple of every bijection U -> V."""
    U, V = _augmented(X, Y)
    C = [[_pair_cost(u, v, m) for v in V] for u in U]
    for perm in itertools.permutations(range(len(V))):
        yield tuple(C[i][j] for i, j in enumerate(perm))


def bijection_costs(X, Y, m: GroundMetric = LINF) -> np.ndarray:
    rows = list(iter_bijections(X, Y, m))
    return np.array(rows, dtype=float).reshape(len(rows), len(X.off_diagonal) + len(Y.off_diagonal))


@lru_cache(maxsize=256)
def _matching_costs_cached(X, Y, m):
    xs, ys = _sides(X, Y)
    a, b = len(xs), len(ys)
    n = a + b
    xd = [m.diagonal_distance(x) for x in xs]
    yd = [m.diagonal_distance(y) for y in ys]
    d = [[m.distance(x, y) for y in ys] for x in xs]
    rows = []

    # assign each x either a distinct y or the diagonal (None)
    def rec(i, used, acc):
        if i == a:
            row = acc + [yd[j] for j in range(b) if j not in used]
            row += [0.0] * (n - len(row))
            rows.append(row)
            return
        rec(i + 1, used, acc + [xd[i]])
        for j in range(b):
            if j not in used:
                used.add(j)
                rec(i + 1, used, acc + [d[i][j]])
                used.discard(j)

    rec(0, set(), [])
    arr = np.array(rows, dtype=float).reshape(len(rows), n)
    arr.setflags(write=False)
    return arr


def matching_costs(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> np.ndarray:
    """Pair distances of every canonical matching, one row each (padded with zeros)."""
    return _matching_costs_cached(X, Y, m)


def brute_profile_value(X: PersistenceDiagram, Y: PersistenceDiagram, t: float, m: GroundMetric = LINF) -> int:
    if not t >= 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    C = matching_costs(X, Y, m)
    if C.shape[1] == 0:
        return 0
    return int((C > t).sum(axis=1).min())


def brute_prokhorov(X: PersistenceDiagram, Y: PersistenceDiagram, f, m: GroundMetric = LINF) -> float:
    """Least candidate passing the predicate, by linear scan."""
    f = _as_param(f)
    for t in prokhorov_candidates(X, Y, f, m):
        if reaches(brute_profile_value(X, Y, t, m), f, t):
            return t
    raise AssertionError("no candidate reached; the largest candidate always should")


def brute_wasserstein(X: PersistenceDiagram, Y: PersistenceDiagram, p: float = 1.0, m: GroundMetric = LINF) -> float:
    if not p >= 1:
        raise ValueError(f"Wasserstein order must be >= 1, got {p}")
    C = matching_costs(X, Y, m)
    if C.shape[1] == 0:
        return 0.0
    return float((C ** p).sum(axis=1).min()) ** (1.0 / p)


def brute_bottleneck(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> float:
    """Min over matchings of the largest pair distance."""
    C = matching_costs(X, Y, m)
    if C.shape[1] == 0:
        return 0.0
    return float(C.max(axis=1).min())


# explicit threshold graph, for checking the implicit matching engine


def threshold_edges(X: PersistenceDiagram, Y: PersistenceDiagram, t: float, m: GroundMetric = LINF):
    """Adjacency lists of the threshold graph, in the matching module's node layout."""
    xs, ys = X.off_diagonal, Y.off_diagonal
    a, b = len(xs), len(ys)
    adj = [[] for _ in range(a + b)]
    for i, x in enumerate(xs):
        for j, y in enumerate(ys):
            if m.distance(x, y) <= t:
                adj[i].append(j)
        if m.diagonal_distance(x) <= t:
            adj[i].append(b + i)
    for j, y in enumerate(ys):
        if m.diagonal_distance(y) <= t:
            adj[a + j].append(j)
        adj[a + j].extend(range(b, b + a))
    return adj


def brute_max_matching(adj) -> int:
    """Kuhn's augmenting-path search over an explicit adjacency list."""
    n_right = 1 + max((v for vs in adj for v in vs), default=-1)
    mate = [-1] * n_right

    def try_augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if mate[v] < 0 or try_augment(mate[v], seen):
                mate[v] = u
                return True
        return False

    return sum(1 for u in range(len(adj)) if try_augment(u, set()))
