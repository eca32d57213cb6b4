"""Maximum-cardinality matching in the geometric threshold graph.

Node layout, with ``a = |X0|`` and ``b = |Y0|``::

    left  U:  0 .. a-1        off-diagonal points of X
              a .. a+b-1      diagonal projections of Y's points
    right V:  0 .. b-1        off-diagonal points of Y
              b .. b+a-1      diagonal projections of X's points

Edges at threshold ``t``: x_i -- y_j when d(x_i, y_j) <= t; x_i -- x_i' and
y_j' -- y_j when the point's diagonal distance is <= t; every projection
y_j' -- every projection x_i' unconditionally.

Hopcroft-Karp phases are run without an explicit edge list. Point-to-point
neighbours come from a deletable uniform grid with cell size >= t, the
projection--projection block is served from a pool of still-unvisited
projections, and own-projection edges are tested directly.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .diagram import LINF, GroundMetric, PersistenceDiagram

__all__ = [
    "MatchingResult",
    "ThresholdMatcher",
    "max_matching_size",
    "maximum_matching",
    "candidate_distances",
]


@dataclass(frozen=True)
class MatchingResult:
    """A maximum matching: ``pairs`` of (left index, right index) in the node layout above."""

    pairs: tuple[tuple[int, int], ...]
    n_x: int
    n_y: int
    threshold: float

    @property
    def cardinality(self) -> int:
        return len(self.pairs)

    @property
    def unmatched(self) -> int:
        """Pairs of the induced bijection at distance > threshold."""
        return self.n_x + self.n_y - len(self.pairs)


class _Grid:
    """Uniform bucket grid over a subset of planar points with deletion.

    Correct for any L_p query radius ``r <= cell``: the L_p ball of radius r
    sits inside the 3x3 block of cells around the query.
    """

    __slots__ = ("cell", "cells", "xs", "ys")

    def __init__(self, xs, ys, cell, indices=()):
        self.cell = cell
        self.xs = xs
        self.ys = ys
        self.cells = defaultdict(list)
        for i in indices:
            self.insert(i)

    def key(self, x, y):
        c = self.cell
        return (math.floor(x / c), math.floor(y / c))

    def insert(self, i):
        self.cells[self.key(self.xs[i], self.ys[i])].append(i)

    def pop_one(self, qx, qy, r, dist):
        """Remove and return one point within ``r`` of (qx, qy), or -1."""
        cx, cy = self.key(qx, qy)
        cells = self.cells
        xs, ys = self.xs, self.ys
        for kx in (cx - 1, cx, cx + 1):
            for ky in (cy - 1, cy, cy + 1):
                bucket = cells.get((kx, ky))
                if not bucket:
                    continue
                for pos, i in enumerate(bucket):
                    if dist((qx, qy), (xs[i], ys[i])) <= r:
                        bucket[pos] = bucket[-1]
                        bucket.pop()
                        if not bucket:
                            del cells[(kx, ky)]
                        return i
        return -1

    def pop_all(self, qx, qy, r, dist):
        """Remove and return every point within ``r`` of (qx, qy)."""
        cx, cy = self.key(qx, qy)
        cells = self.cells
        xs, ys = self.xs, self.ys
        found = []
        for kx in (cx - 1, cx, cx + 1):
            for ky in (cy - 1, cy, cy + 1):
                bucket = cells.get((kx, ky))
                if not bucket:
                    continue
                keep = []
                for i in bucket:
                    if dist((qx, qy), (xs[i], ys[i])) <= r:
                        found.append(i)
                    else:
                        keep.append(i)
                if len(keep) != len(bucket):
                    if keep:
                        cells[(kx, ky)] = keep
                    else:
                        del cells[(kx, ky)]
        return found


def _cell_size(t, scale):
    # cell must be >= t; also keep coordinates / cell finite for tiny t
    return max(t, scale * 1e-9, 1e-300)


class ThresholdMatcher:
    """Incremental Hopcroft-Karp engine for one pair of diagrams.

    Edges only appear as the threshold grows, so a matching found at ``s``
    stays valid at any ``t >= s``; :meth:`solve` augments from the current
    state. Call with non-decreasing thresholds, or :meth:`copy` first.
    """

    def __init__(self, X: PersistenceDiagram, Y: PersistenceDiagram, metric: GroundMetric = LINF):
        self.metric = metric
        xs = X.off_diagonal
        ys = Y.off_diagonal
        self.a = a = len(xs)
        self.b = b = len(ys)
        self.xb = [p.birth for p in xs]
        self.xd = [p.death for p in xs]
        self.yb = [p.birth for p in ys]
        self.yd = [p.death for p in ys]
        self.xdiag = [metric.diagonal_distance(p) for p in xs]
        self.ydiag = [metric.diagonal_distance(p) for p in ys]
        coords = [abs(v) for v in self.xb + self.xd + self.yb + self.yd]
        self.scale = max(coords, default=1.0) or 1.0
        n = a + b
        self.mate_u = [-1] * n
        self.mate_v = [-1] * n
        self.size = 0
        self.threshold = 0.0

    def copy(self) -> "ThresholdMatcher":
        other = object.__new__(ThresholdMatcher)
        other.__dict__.update(self.__dict__)
        other.mate_u = list(self.mate_u)
        other.mate_v = list(self.mate_v)
        return other

    @property
    def n(self) -> int:
        return self.a + self.b

    def solve(self, t: float) -> int:
        """Grow the matching to maximum cardinality at threshold ``t``."""
        if not t >= 0:
            raise ValueError(f"threshold must be nonnegative, got {t}")
        if t < self.threshold:
            raise ValueError("thresholds must be non-decreasing; use copy() to branch")
        self.threshold = t
        while self.size < self.n and self._phase(t):
            pass
        return self.size

    def result(self) -> MatchingResult:
        pairs = tuple((u, v) for u, v in enumerate(self.mate_u) if v >= 0)
        return MatchingResult(pairs, self.a, self.b, self.threshold)

    # -- one Hopcroft-Karp phase -------------------------------------------

    def _phase(self, t: float) -> bool:
        a, b = self.a, self.b
        n = a + b
        dist = self.metric.distance
        xb, xd, yb, yd = self.xb, self.xd, self.yb, self.yd
        xdiag, ydiag = self.xdiag, self.ydiag
        mate_u, mate_v = self.mate_u, self.mate_v
        cell = _cell_size(t, self.scale)

        # BFS: every right node is discovered at most once; its layer is the
        # layer of the left node that reached it first.
        layer_u = [-1] * n
        layer_v = [-1] * n
        grid = _Grid(yb, yd, cell, range(b))
        proj_pool = list(range(b, b + a))  # undiscovered X0' projections
        frontier = [u for u in range(n) if mate_u[u] < 0]
        for u in frontier:
            layer_u[u] = 0
        per_layer_pts = []  # Y0 indices discovered at each layer
        per_layer_proj = []  # X0' right indices discovered at each layer
        last = -1
        k = 0
        while frontier:
            found_pts = []
            found_proj = []
            free_hit = False
            nxt = []
            for u in frontier:
                if u < a:
                    hits = grid.pop_all(xb[u], xd[u], t, dist)
                    found_pts.extend(hits)
                    v = b + u
                    if layer_v[v] < 0 and xdiag[u] <= t:
                        hits.append(v)
                        found_proj.append(v)
                        # taken out of the pool lazily (pool skips discovered)
                else:
                    j = u - a
                    hits = []
                    if layer_v[j] < 0 and ydiag[j] <= t:
                        # remove y_j from the grid as well
                        if _grid_remove(grid, j):
                            hits.append(j)
                            found_pts.append(j)
                    while proj_pool:
                        v = proj_pool.pop()
                        if layer_v[v] < 0:
                            hits.append(v)
                            found_proj.append(v)
                            layer_v[v] = k
                for v in hits:
                    layer_v[v] = k
                    w = mate_v[v]
                    if w < 0:
                        free_hit = True
                    elif layer_u[w] < 0:
                        layer_u[w] = k + 1
                        nxt.append(w)
            per_layer_pts.append(found_pts)
            per_layer_proj.append(found_proj)
            if free_hit:
                last = k
                break
            frontier = nxt
            k += 1
        if last < 0:
            return False

        # DFS over the layered graph. Right nodes are consumed on visit.
        grids = [_Grid(yb, yd, cell, pts) for pts in per_layer_pts]
        projs = per_layer_proj
        used_v = [False] * n
        augmented = 0

        def next_right(u):
            k = layer_u[u]
            if u < a:
                v = grids[k].pop_one(xb[u], xd[u], t, dist)
                if v >= 0:
                    used_v[v] = True
                    return v
                v = b + u
                if layer_v[v] == k and not used_v[v] and xdiag[u] <= t:
                    used_v[v] = True
                    return v
                return -1
            j = u - a
            if layer_v[j] == k and not used_v[j] and ydiag[j] <= t:
                if _grid_remove(grids[k], j):
                    used_v[j] = True
                    return j
            pool = projs[k]
            while pool:
                v = pool.pop()
                if not used_v[v]:
                    used_v[v] = True
                    return v
            return -1

        for root in range(n):
            if mate_u[root] >= 0 or layer_u[root] != 0:
                continue
            stack_u = [root]
            stack_v = []
            while stack_u:
                u = stack_u[-1]
                v = next_right(u)
                if v < 0:
                    stack_u.pop()
                    if stack_v:
                        stack_v.pop()
                    continue
                w = mate_v[v]
                if w < 0:
                    if layer_u[u] == last:
                        stack_v.append(v)
                        for uu, vv in zip(stack_u, stack_v):
                            mate_u[uu] = vv
                            mate_v[vv] = uu
                        augmented += 1
                        break
                    continue
                if layer_u[u] < last and layer_u[w] == layer_u[u] + 1:
                    stack_v.append(v)
                    stack_u.append(w)
        self.size += augmented
        return augmented > 0


def _grid_remove(grid: _Grid, i: int) -> bool:
    key = grid.key(grid.xs[i], grid.ys[i])
    bucket = grid.cells.get(key)
    if not bucket:
        return False
    try:
        pos = bucket.index(i)
    except ValueError:
        return False
    bucket[pos] = bucket[-1]
    bucket.pop()
    if not bucket:
        del grid.cells[key]
    return True


def max_matching_size(
    X: PersistenceDiagram, Y: PersistenceDiagram, t: float, m: GroundMetric = LINF
) -> int:
    """Maximum matching cardinality M(t) of the threshold graph."""
    if not t >= 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    return ThresholdMatcher(X, Y, m).solve(t)


def maximum_matching(
    X: PersistenceDiagram, Y: PersistenceDiagram, t: float, m: GroundMetric = LINF
) -> MatchingResult:
    eng = ThresholdMatcher(X, Y, m)
    eng.solve(t)
    return eng.result()


def candidate_distances(
    X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF
) -> np.ndarray:
    """Sorted distinct thresholds at which M(t) can jump, with 0 prepended."""
    A = X.off_diagonal_array()
    B = Y.off_diagonal_array()
    parts = [np.zeros(1)]
    if len(A) and len(B):
        parts.append(m.pairwise(A, B).ravel())
    if len(A):
        parts.append(m.diagonal_distances(A))
    if len(B):
        parts.append(m.diagonal_distances(B))
    return np.unique(np.concatenate(parts))
