import random

import pytest
from hypothesis import strategies as st

from pdmetric import PersistenceDiagram

SHIFT_X = PersistenceDiagram([(0, 10), (0, 20), (0, 30), (0, 40)])
SHIFT_Y = PersistenceDiagram([(0, 13), (0, 23), (0, 33), (0, 43)])
STABLE = PersistenceDiagram([(0, 6), (0, 2)])
EMPTY = PersistenceDiagram([])
SINGLE_A = PersistenceDiagram([(0, 4)])
SINGLE_B = PersistenceDiagram([(1, 5)])


def random_diagram(rng: random.Random, n: int, lo: float = 0.0, hi: float = 10.0) -> PersistenceDiagram:
    """n points uniform in [lo, hi]^2 above the diagonal."""
    pts = []
    for _ in range(n):
        u, v = rng.uniform(lo, hi), rng.uniform(lo, hi)
        pts.append((min(u, v), max(u, v)))
    return PersistenceDiagram(pts)


# dyadic coordinates keep L1/Linf arithmetic exact, so boundary ties are real ties
dyadic = st.integers(min_value=0, max_value=40).map(lambda k: k / 4)


@st.composite
def diagrams(draw, max_points=4):
    n = draw(st.integers(min_value=0, max_value=max_points))
    pts = []
    for _ in range(n):
        b = draw(dyadic)
        pers = draw(st.integers(min_value=0, max_value=24).map(lambda k: k / 4))
        pts.append((b, b + pers))
    return PersistenceDiagram(pts)


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE = []


def record_acceptance(name: str, ok: bool, detail: str = "") -> None:
    _ACCEPTANCE.append((name, ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in _ACCEPTANCE:
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {name}" + (f"  ({detail})" if detail else ""))
