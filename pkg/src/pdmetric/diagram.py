"""Persistence diagrams, planar ground metrics and the diagram text format.

A diagram is a finite multiset of (birth, death) points with death >= birth.
Multiplicity is carried by repetition. Points on the diagonal are accepted
but never take part in a matching.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

import numpy as np

__all__ = [
    "PlanePoint",
    "PersistenceDiagram",
    "GroundMetric",
    "LINF",
    "DiagramParseError",
    "parse_diagram",
    "serialize_diagram",
    "load_diagram",
    "ground_distance",
    "project_to_diagonal",
    "diagonal_distance",
]


class DiagramParseError(ValueError):
    """Raised for malformed diagram text; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class PlanePoint(NamedTuple):
    birth: float
    death: float

    @property
    def persistence(self) -> float:
        return self.death - self.birth


def _check_point(birth: float, death: float) -> PlanePoint:
    b, d = float(birth), float(death)
    if not (math.isfinite(b) and math.isfinite(d)):
        raise ValueError(f"non-finite coordinate in point ({birth}, {death})")
    if d < b:
        raise ValueError(f"death < birth in point ({birth}, {death})")
    return PlanePoint(b, d)


@dataclass(frozen=True)
class PersistenceDiagram:
    """Immutable persistence diagram.

    Parameters
    ----------
    points : iterable of (birth, death) pairs
        Repeated entries encode multiplicity. Infinite deaths are rejected.
    """

    points: tuple[PlanePoint, ...] = ()
    _array: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __init__(self, points: Iterable[Sequence[float]] = ()):
        pts = tuple(_check_point(p[0], p[1]) for p in points)
        object.__setattr__(self, "points", pts)
        arr = np.array(pts, dtype=float).reshape(len(pts), 2)
        arr.setflags(write=False)
        object.__setattr__(self, "_array", arr)

    @classmethod
    def from_array(cls, arr) -> "PersistenceDiagram":
        a = np.asarray(arr, dtype=float)
        if a.size == 0:
            return cls(())
        if a.ndim != 2 or a.shape[1] != 2:
            raise ValueError(f"expected an (n, 2) array, got shape {a.shape}")
        return cls(map(tuple, a.tolist()))

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def array(self) -> np.ndarray:
        """Read-only (n, 2) array of all points."""
        return self._array

    @property
    def off_diagonal(self) -> tuple[PlanePoint, ...]:
        return tuple(p for p in self.points if p.death > p.birth)

    @property
    def projections(self) -> tuple[PlanePoint, ...]:
        return tuple(project_to_diagonal(p) for p in self.off_diagonal)

    def off_diagonal_array(self) -> np.ndarray:
        a = self._array
        return a[a[:, 1] > a[:, 0]] if len(a) else a

    def canonical(self) -> tuple[PlanePoint, ...]:
        """Sorted off-diagonal multiset; equal iff the diagrams are metrically equal."""
        return tuple(sorted(self.off_diagonal))


@dataclass(frozen=True)
class GroundMetric:
    """The L_order norm on the plane. ``order`` is a real >= 1 or ``math.inf``."""

    order: float = math.inf

    def __post_init__(self):
        o = float(self.order)
        if math.isnan(o) or o < 1:
            raise ValueError(f"ground metric order must be >= 1 or inf, got {self.order}")
        object.__setattr__(self, "order", o)

    @classmethod
    def parse(cls, text: str) -> "GroundMetric":
        t = str(text).strip().lower()
        if t in ("inf", "infinity", "linf", "max"):
            return cls(math.inf)
        return cls(float(t))

    @property
    def label(self) -> str:
        return "inf" if math.isinf(self.order) else format(self.order, "g")

    @property
    def _diag_factor(self) -> float:
        # distance from (b, d) to ((b+d)/2, (b+d)/2) is ((d-b)/2) * 2**(1/p)
        p = self.order
        if math.isinf(p):
            return 1.0
        if p == 1.0:
            return 2.0
        if p == 2.0:
            return math.sqrt(2.0)
        return 2.0 ** (1.0 / p)

    def distance(self, a: Sequence[float], b: Sequence[float]) -> float:
        dx = abs(a[0] - b[0])
        dy = abs(a[1] - b[1])
        p = self.order
        if p == math.inf:
            return dx if dx > dy else dy
        if p == 1.0:
            return dx + dy
        if p == 2.0:
            return math.sqrt(dx * dx + dy * dy)
        return (dx ** p + dy ** p) ** (1.0 / p)

    def diagonal_distance(self, a: Sequence[float]) -> float:
        half = (a[1] - a[0]) / 2.0
        if self.order == math.inf:
            return half
        return half * self._diag_factor

    # Vectorized forms. They must agree bit-for-bit with the scalar forms
    # above: candidate thresholds are compared with `<=` against scalar
    # distances inside the matching engine.

    def pairwise(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=float).reshape(-1, 2)
        B = np.asarray(B, dtype=float).reshape(-1, 2)
        dx = np.abs(A[:, None, 0] - B[None, :, 0])
        dy = np.abs(A[:, None, 1] - B[None, :, 1])
        p = self.order
        if p == math.inf:
            return np.maximum(dx, dy)
        if p == 1.0:
            return dx + dy
        if p == 2.0:
            return np.sqrt(dx * dx + dy * dy)
        # np.power may use SIMD kernels that differ from libm in the last ulp
        out = np.empty(dx.shape)
        inv = 1.0 / p
        for idx, (u, v) in enumerate(zip(dx.ravel().tolist(), dy.ravel().tolist())):
            out.flat[idx] = (u ** p + v ** p) ** inv
        return out

    def diagonal_distances(self, A: np.ndarray) -> np.ndarray:
        A = np.asarray(A, dtype=float).reshape(-1, 2)
        half = (A[:, 1] - A[:, 0]) / 2.0
        if self.order == math.inf:
            return half
        return half * self._diag_factor


LINF = GroundMetric()


def ground_distance(a: Sequence[float], b: Sequence[float], m: GroundMetric = LINF) -> float:
    return m.distance(a, b)


def project_to_diagonal(a: Sequence[float]) -> PlanePoint:
    mid = (a[0] + a[1]) / 2.0
    return PlanePoint(mid, mid)


def diagonal_distance(a: Sequence[float], m: GroundMetric = LINF) -> float:
    """Distance from ``a`` to its nearest diagonal point under ``m``."""
    return m.diagonal_distance(a)


_SPLIT = re.compile(r"[,\s]+")


def parse_diagram(text: str, source: str | None = None) -> PersistenceDiagram:
    """Parse the line-oriented diagram format.

    Each data line holds ``birth death`` separated by whitespace or a comma.
    Blank lines and lines starting with ``#`` are skipped.
    """
    pts = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f for f in _SPLIT.split(line) if f]
        if len(fields) != 2:
            raise DiagramParseError(
                f"expected two numbers, found {len(fields)} field(s): {line!r}", lineno, source
            )
        try:
            b, d = float(fields[0]), float(fields[1])
        except ValueError:
            raise DiagramParseError(f"malformed number in {line!r}", lineno, source) from None
        if not (math.isfinite(b) and math.isfinite(d)):
            raise DiagramParseError(f"non-finite value in {line!r}", lineno, source)
        if d < b:
            raise DiagramParseError(f"death < birth in {line!r}", lineno, source)
        pts.append((b, d))
    return PersistenceDiagram(pts)


def serialize_diagram(dgm: PersistenceDiagram) -> str:
    # repr() round-trips doubles exactly
    return "".join(f"{p.birth!r} {p.death!r}\n" for p in dgm.points)


def load_diagram(path: str | Path) -> PersistenceDiagram:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DiagramParseError(f"cannot read diagram: {exc}", None, str(path)) from None
    return parse_diagram(text, source=str(path))
