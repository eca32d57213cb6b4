"""Parameter functions and the f-Prokhorov distances between diagrams.

``pi_f(X, Y) = inf{t > 0 : D(t) < f(t)}``. The infimum lies in a finite
candidate set (jump points of D and the preimages f^-1(k)), which is
sorted and binary searched with one profile evaluation per probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagram import LINF, GroundMetric, PersistenceDiagram
from .matching import candidate_distances
from .profile import profile_value

__all__ = [
    "ParamFunction",
    "eval_f",
    "inverse_f",
    "prokhorov_candidates",
    "reaches",
    "prokhorov_distance",
    "kth_bottleneck",
]


@dataclass(frozen=True)
class ParamFunction:
    """Either a polynomial with nonnegative coefficients or a constant integer.

    Polynomials with a zero constant term and some positive higher
    coefficient are strictly increasing and superadditive on [0, inf); those
    give metrics. A constant ``k`` turns pi_f into the k-th bottleneck, a
    query rather than a metric.
    """

    coefficients: tuple[float, ...] | None = None
    constant: int | None = None

    def __post_init__(self):
        if (self.coefficients is None) == (self.constant is None):
            raise ValueError("give exactly one of coefficients / constant")
        if self.constant is not None:
            k = self.constant
            if isinstance(k, bool) or int(k) != k or k < 1:
                raise ValueError(f"constant f must be a positive integer, got {k}")
            object.__setattr__(self, "constant", int(k))
            return
        cs = tuple(float(c) for c in self.coefficients)
        if not cs:
            raise ValueError("empty coefficient list")
        if any(not math.isfinite(c) or c < 0 for c in cs):
            raise ValueError(f"coefficients must be finite and nonnegative, got {cs}")
        if cs[0] != 0:
            raise ValueError("the constant coefficient must be zero to obtain a metric")
        if not any(c > 0 for c in cs[1:]):
            raise ValueError("at least one coefficient of degree >= 1 must be positive")
        while cs[-1] == 0:
            cs = cs[:-1]
        object.__setattr__(self, "coefficients", cs)

    @classmethod
    def polynomial(cls, coefficients: Sequence[float]) -> "ParamFunction":
        return cls(coefficients=tuple(coefficients))

    @classmethod
    def monomial(cls, c: float, q: int) -> "ParamFunction":
        """``c * t**q`` for a positive integer ``q``."""
        if int(q) != q or q < 1:
            raise ValueError(f"monomial exponent must be a positive integer, got {q}")
        return cls(coefficients=(0.0,) * int(q) + (float(c),))

    @classmethod
    def const(cls, k: int) -> "ParamFunction":
        return cls(constant=k)

    @classmethod
    def parse(cls, text: str) -> "ParamFunction":
        """Parse ``poly:c0,c1,...`` or ``const:k``."""
        kind, sep, body = str(text).strip().partition(":")
        if not sep:
            raise ValueError(f"expected 'poly:...' or 'const:k', got {text!r}")
        kind = kind.strip().lower()
        if kind == "poly":
            try:
                cs = [float(c) for c in body.split(",") if c.strip()]
            except ValueError:
                raise ValueError(f"malformed coefficient list {body!r}") from None
            return cls.polynomial(cs)
        if kind == "const":
            try:
                k = int(body.strip())
            except ValueError:
                raise ValueError(f"constant must be an integer, got {body!r}") from None
            return cls.const(k)
        raise ValueError(f"unknown parameter function kind {kind!r}")

    @property
    def is_metric(self) -> bool:
        return self.coefficients is not None

    @property
    def spec(self) -> str:
        if self.constant is not None:
            return f"const:{self.constant}"
        return "poly:" + ",".join(format(c, "g") for c in self.coefficients)

    def __call__(self, t: float) -> float:
        return eval_f(self, t)


def _as_param(f) -> ParamFunction:
    if isinstance(f, ParamFunction):
        return f
    if isinstance(f, str):
        return ParamFunction.parse(f)
    return ParamFunction.polynomial(f)


def eval_f(f: ParamFunction, t: float) -> float:
    if f.constant is not None:
        return float(f.constant)
    # Horner with nonnegative coefficients and t >= 0 is monotone in t
    # under IEEE rounding, which keeps the search predicate monotone.
    acc = 0.0
    for c in reversed(f.coefficients):
        acc = acc * t + c
    return acc


def _single_term(cs):
    nz = [(i, c) for i, c in enumerate(cs) if c != 0]
    return nz[0] if len(nz) == 1 else None


def inverse_f(f: ParamFunction, y: float) -> float:
    """Least double ``t >= 0`` with ``f(t) >= y``.

    This is the preimage of ``y`` up to one ulp. Linear and single-term
    polynomials start from the closed form; others are bracketed by doubling
    and bisected down to adjacent doubles.
    """
    f = _as_param(f)
    if f.constant is not None:
        raise ValueError("a constant parameter function has no inverse")
    if not y >= 0:
        raise ValueError(f"inverse requires y >= 0, got {y}")
    if y == 0:
        return 0.0
    term = _single_term(f.coefficients)
    if term is not None:
        q, c = term
        t = y / c if q == 1 else (y / c) ** (1.0 / q)
        if math.isfinite(t):
            return _snap_least(f, y, t)
    lo, hi = 0.0, 1.0
    while eval_f(f, hi) < y:
        lo, hi = hi, hi * 2.0
        if math.isinf(hi):
            raise OverflowError(f"no finite preimage for {y}")
    while True:
        mid = lo + (hi - lo) / 2.0
        if mid <= lo or mid >= hi:
            return hi
        if eval_f(f, mid) >= y:
            hi = mid
        else:
            lo = mid


def _snap_least(f, y, t):
    # nudge a closed-form estimate to the least double with f(t) >= y
    t = max(t, 0.0)
    while eval_f(f, t) < y:
        t = math.nextafter(t, math.inf)
    while t > 0:
        prev = math.nextafter(t, 0.0)
        if eval_f(f, prev) >= y:
            t = prev
        else:
            break
    return t


def prokhorov_candidates(
    X: PersistenceDiagram, Y: PersistenceDiagram, f: ParamFunction, m: GroundMetric = LINF
) -> list[float]:
    """Sorted candidate set: jump points of D, 0, and f^-1(k) for k <= |X0| + |Y0|."""
    f = _as_param(f)
    T = candidate_distances(X, Y, m)
    if f.is_metric:
        n = len(X.off_diagonal) + len(Y.off_diagonal)
        inv = [inverse_f(f, float(k)) for k in range(n + 1)]
        T = np.unique(np.concatenate([T, np.asarray(inv)]))
    return T.tolist()


def reaches(D: int, f: ParamFunction, t: float) -> bool:
    """Whether ``t >= pi_f`` given ``D = D(t)``.

    For strictly increasing f this is ``D <= f(t)``: at a crossing f(t) = D
    the strict inequality holds just to the right of t, so t is the
    infimum. For a constant k it is ``D < k`` since D is right-continuous.
    """
    if f.constant is not None:
        return D < f.constant
    return D <= eval_f(f, t)


def prokhorov_distance(
    X: PersistenceDiagram, Y: PersistenceDiagram, f, m: GroundMetric = LINF
) -> float:
    """f-Prokhorov distance by binary search over the candidate set.

    ``f`` is a :class:`ParamFunction`, a ``poly:``/``const:`` string, or a
    coefficient sequence ``(0, c1, c2, ...)``.
    """
    f = _as_param(f)
    T = prokhorov_candidates(X, Y, f, m)
    lo, hi = 0, len(T) - 1
    # the largest candidate is >= the bottleneck distance, where D = 0
    while lo < hi:
        mid = (lo + hi) // 2
        t = T[mid]
        if reaches(profile_value(X, Y, t, m), f, t):
            hi = mid
        else:
            lo = mid + 1
    return T[lo]


def kth_bottleneck(X: PersistenceDiagram, Y: PersistenceDiagram, k: int, m: GroundMetric = LINF) -> float:
    """``inf{t > 0 : D(t) < k}``; k = 1 is the bottleneck distance."""
    if int(k) != k or k < 1:
        raise ValueError(f"k must be a positive integer, got {k}")
    return prokhorov_distance(X, Y, ParamFunction.const(int(k)), m)
