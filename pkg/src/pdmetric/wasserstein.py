"""Reference Wasserstein/bottleneck distances and the inequality audit."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .diagram import LINF, GroundMetric, PersistenceDiagram
from .matching import candidate_distances
from .profile import full_profile
from .prokhorov import ParamFunction, kth_bottleneck, prokhorov_distance

__all__ = [
    "SLACK",
    "cost_matrix",
    "wasserstein_distance",
    "bottleneck_distance",
    "max_pair_distance",
    "optimal_assignment",
    "midpoint_diagram",
    "BoundsReport",
    "audit_bounds",
]

SLACK = 1e-9


def cost_matrix(X: PersistenceDiagram, Y: PersistenceDiagram, p: float, m: GroundMetric = LINF) -> np.ndarray:
    """Square cost matrix of the diagonal-augmented assignment problem.

    Rows are X0 then Y0' (projections of Y), columns are Y0 then X0'. A point
    may only go to its own projection; projection-projection slots are free.
    """
    A = X.off_diagonal_array()
    B = Y.off_diagonal_array()
    a, b = len(A), len(B)
    C = np.full((a + b, a + b), np.inf)
    if a and b:
        C[:a, :b] = m.pairwise(A, B) ** p
    if a:
        C[np.arange(a), b + np.arange(a)] = m.diagonal_distances(A) ** p
    if b:
        C[a + np.arange(b), np.arange(b)] = m.diagonal_distances(B) ** p
    C[a:, b:] = 0.0
    return C


def wasserstein_distance(X: PersistenceDiagram, Y: PersistenceDiagram, p: float = 1.0, m: GroundMetric = LINF) -> float:
    """Exact p-Wasserstein distance via optimal assignment. ``p = inf`` gives the bottleneck."""
    p = float(p)
    if math.isnan(p) or p < 1:
        raise ValueError(f"Wasserstein order must be >= 1, got {p}")
    if math.isinf(p):
        return bottleneck_distance(X, Y, m)
    C = cost_matrix(X, Y, p, m)
    if C.size == 0:
        return 0.0
    rows, cols = linear_sum_assignment(C)
    total = float(C[rows, cols].sum())
    return total ** (1.0 / p)


def optimal_assignment(X: PersistenceDiagram, Y: PersistenceDiagram, p: float = 1.0, m: GroundMetric = LINF):
    """Optimal W_p pairing as ``(x_index | None, y_index | None)`` tuples; None is the diagonal."""
    a, b = len(X.off_diagonal), len(Y.off_diagonal)
    C = cost_matrix(X, Y, p, m)
    if C.size == 0:
        return []
    out = []
    for r, c in zip(*linear_sum_assignment(C)):
        xi = r if r < a else None
        yj = c if c < b else None
        if xi is not None or yj is not None:
            out.append((xi, yj))
    return out


def midpoint_diagram(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> PersistenceDiagram:
    """Diagram halfway along an optimal W_1 matching between X and Y."""
    xs, ys = X.off_diagonal, Y.off_diagonal
    pts = []
    for xi, yj in optimal_assignment(X, Y, 1.0, m):
        if xi is not None and yj is not None:
            u, v = xs[xi], ys[yj]
            pts.append(((u[0] + v[0]) / 2.0, (u[1] + v[1]) / 2.0))
        else:
            u = xs[xi] if xi is not None else ys[yj]
            mid = (u[0] + u[1]) / 2.0
            b, d = (u[0] + mid) / 2.0, (u[1] + mid) / 2.0
            pts.append((b, max(b, d)))
    return PersistenceDiagram(pts)


def bottleneck_distance(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> float:
    return kth_bottleneck(X, Y, 1, m)


def max_pair_distance(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> float:
    """Largest distance any pair of a matching can have (cross or to the diagonal)."""
    return float(candidate_distances(X, Y, m)[-1])


@dataclass(frozen=True)
class BoundCheck:
    name: str
    left: float
    right: float

    @property
    def holds(self) -> bool:
        return self.left <= self.right + SLACK


@dataclass
class BoundsReport:
    entries: list[BoundCheck] = field(default_factory=list)

    def add(self, name: str, left: float, right: float) -> None:
        self.entries.append(BoundCheck(name, float(left), float(right)))

    def extend(self, other: "BoundsReport") -> None:
        self.entries.extend(other.entries)

    @property
    def all_hold(self) -> bool:
        return all(e.holds for e in self.entries)

    @property
    def failures(self) -> list[BoundCheck]:
        return [e for e in self.entries if not e.holds]

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def format(self) -> str:
        width = max((len(e.name) for e in self.entries), default=0)
        lines = []
        for e in self.entries:
            status = "holds" if e.holds else "VIOLATED"
            lines.append(f"{e.name:<{width}}  {e.left:.12g} <= {e.right:.12g}  {status}")
        return "\n".join(lines)


def _probe_points(steps):
    # one interior point per step; the last step is unbounded
    ts = [s[0] for s in steps]
    out = []
    for lo, hi in zip(ts, ts[1:]):
        out.append((lo + hi) / 2.0)
    out.append(2.0 * ts[-1] if ts[-1] > 0 else 1.0)
    return out


def audit_bounds(
    X: PersistenceDiagram,
    Y: PersistenceDiagram,
    p: float = 1.0,
    q: int = 1,
    c: float = 1.0,
    m: GroundMetric = LINF,
) -> BoundsReport:
    """Evaluate both sides of each proven comparison between D, pi_f and W_p.

    ``q`` must be a positive integer so that ``c t^q`` is a polynomial
    parameter function.

    The size factor of the Wasserstein-by-Prokhorov bound uses
    ``n - min(1, pi_q^q)`` with ``n = |X0| + |Y0|``. With ``- 1`` in its
    place the bound fails whenever pi_q < 1 and every pair goes to the
    diagonal, e.g. X = {(0, 0.2)} against the empty diagram.
    """
    p = float(p)
    if not p >= 1 or math.isinf(p):
        raise ValueError(f"p must be a finite order >= 1, got {p}")
    if int(q) != q or q < 1:
        raise ValueError(f"q must be a positive integer, got {q}")
    if not c > 0:
        raise ValueError(f"c must be positive, got {c}")
    q = int(q)
    rep = BoundsReport()
    prof = full_profile(X, Y, m)
    wp = wasserstein_distance(X, Y, p, m)
    wq = wasserstein_distance(X, Y, q, m)
    wb = prof.bottleneck
    n = prof.n_x + prof.n_y
    dmax = max_pair_distance(X, Y, m)

    for t in _probe_points(prof.steps):
        rep.add(f"chebyshev[p={p:g},t={t:.6g}]", prof(t), wp ** p / t ** p)

    f_cq = ParamFunction.monomial(c, q)
    pi_cq = prokhorov_distance(X, Y, f_cq, m)
    rep.add(
        f"prokhorov_le_wasserstein[p={p:g},q={q},c={c:g}]",
        pi_cq,
        wp ** (p / (p + q)) * c ** (-1.0 / (p + q)),
    )

    f_q = ParamFunction.monomial(1.0, q)
    pi_q = pi_cq if c == 1 else prokhorov_distance(X, Y, f_q, m)
    size_q = dmax ** q + n - min(1.0, pi_q ** q)
    rep.add(f"wasserstein_le_prokhorov[q={q}]", wq ** q, pi_q ** q * size_q)
    rep.add(
        f"wasserstein_chain[p={p:g},q={q}]",
        wq ** q,
        wp ** (p * q / (p + q)) * size_q,
    )

    w1 = wq if q == 1 else wasserstein_distance(X, Y, 1, m)
    w2 = wp if p == 2 else wasserstein_distance(X, Y, 2, m)
    pi_1 = pi_q if q == 1 else prokhorov_distance(X, Y, ParamFunction.monomial(1.0, 1), m)
    rep.add("w1_le_w2^(2/3)", w1, w2 ** (2.0 / 3.0) * (dmax + n - min(1.0, pi_1)))

    rep.add(f"bottleneck_le_wasserstein[p={p:g}]", wb, wp)
    rep.add(f"prokhorov_le_bottleneck[q={q}]", pi_q, wb)
    return rep
