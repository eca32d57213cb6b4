"""Bottleneck profiles: point evaluation, the full step function, and queries."""

from __future__ import annotations

import bisect
import json
import math
from dataclasses import dataclass

from .diagram import LINF, GroundMetric, PersistenceDiagram
from .matching import ThresholdMatcher, candidate_distances

__all__ = ["BottleneckProfile", "profile_value", "full_profile", "profile_query"]


@dataclass(frozen=True)
class BottleneckProfile:
    """Right-continuous nonincreasing step function ``t -> D(t)``.

    ``steps[i] = (t_i, v_i)`` means D(s) = v_i for s in [t_i, t_{i+1}); the
    last step extends to infinity and has value 0.
    """

    steps: tuple[tuple[float, int], ...]
    n_x: int
    n_y: int
    metric: GroundMetric = LINF

    def __post_init__(self):
        ts = [s[0] for s in self.steps]
        vs = [s[1] for s in self.steps]
        if not ts or ts[0] != 0:
            raise ValueError("profile must start at t = 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("thresholds must be strictly increasing")
        if any(b >= a for a, b in zip(vs, vs[1:])):
            raise ValueError("values must be strictly decreasing")
        if vs[-1] != 0:
            raise ValueError("final value must be 0")
        if vs[0] > self.n_x + self.n_y:
            raise ValueError("initial value exceeds |X0| + |Y0|")
        object.__setattr__(self, "_ts", ts)

    @property
    def thresholds(self) -> list[float]:
        return list(self._ts)

    @property
    def values(self) -> list[int]:
        return [s[1] for s in self.steps]

    def __call__(self, t: float) -> int:
        return profile_query(self, t)

    @property
    def bottleneck(self) -> float:
        """Start of the zero step, i.e. the bottleneck distance."""
        return self.steps[-1][0]

    def to_dict(self) -> dict:
        return {
            "ground_order": self.metric.label,
            "n_x": self.n_x,
            "n_y": self.n_y,
            "steps": [[t, v] for t, v in self.steps],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "BottleneckProfile":
        return cls(
            tuple((float(t), int(v)) for t, v in doc["steps"]),
            int(doc["n_x"]),
            int(doc["n_y"]),
            GroundMetric.parse(doc.get("ground_order", "inf")),
        )

    def to_csv(self) -> str:
        return "t,value\n" + "".join(f"{t!r},{v}\n" for t, v in self.steps)


def profile_query(P: BottleneckProfile, t: float) -> int:
    if not t >= 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    i = bisect.bisect_right(P._ts, t) - 1
    return P.steps[i][1]


def profile_value(
    X: PersistenceDiagram, Y: PersistenceDiagram, t: float, m: GroundMetric = LINF
) -> int:
    """D_{X,Y}(t): least number of pairs at distance > t over all matchings."""
    if not t >= 0:
        raise ValueError(f"threshold must be nonnegative, got {t}")
    eng = ThresholdMatcher(X, Y, m)
    return eng.n - eng.solve(t)


def full_profile(X: PersistenceDiagram, Y: PersistenceDiagram, m: GroundMetric = LINF) -> BottleneckProfile:
    """Compute the whole step function of D_{X,Y}.

    Jumps can only happen at candidate distances. The sorted candidates are
    bisected: where M agrees at both ends of a range nothing in between can
    jump, otherwise the midpoint is solved starting from the matching of the
    left end, which remains valid there.
    """
    T = candidate_distances(X, Y, m).tolist()
    root = ThresholdMatcher(X, Y, m)
    n = root.n
    root.solve(T[0])
    top = root.copy()
    top.solve(T[-1])
    sizes = {0: root.size, len(T) - 1: top.size}

    # explicit stack instead of recursion; (lo, hi, engine at lo)
    stack = [(0, len(T) - 1, root)]
    while stack:
        lo, hi, eng = stack.pop()
        if hi - lo <= 1 or sizes[lo] == sizes[hi]:
            continue
        mid = (lo + hi) // 2
        e_mid = eng.copy()
        e_mid.solve(T[mid])
        sizes[mid] = e_mid.size
        stack.append((mid, hi, e_mid))
        stack.append((lo, mid, eng))

    steps = []
    prev = None
    for i in sorted(sizes):
        d = n - sizes[i]
        if d != prev:
            steps.append((T[i], d))
            prev = d
    nx = len(X.off_diagonal)
    ny = len(Y.off_diagonal)
    return BottleneckProfile(tuple(steps), nx, ny, m)
