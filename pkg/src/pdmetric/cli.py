"""``pdmetric`` command line: profile, dist, matrix, check."""

from __future__ import annotations

import argparse
import io
import itertools
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracle
from .diagram import DiagramParseError, GroundMetric, PersistenceDiagram, load_diagram
from .profile import full_profile
from .prokhorov import ParamFunction, kth_bottleneck, prokhorov_distance
from .wasserstein import (
    BoundsReport,
    audit_bounds,
    bottleneck_distance,
    midpoint_diagram,
    wasserstein_distance,
)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_SPEC = 3

KINDS = ("prokhorov", "bottleneck", "kth-bottleneck", "wasserstein")


class SpecError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".12g")


@dataclass(frozen=True)
class MetricSpec:
    kind: str
    ground: GroundMetric
    f: ParamFunction | None = None
    k: int | None = None
    p: float | None = None

    @classmethod
    def from_args(cls, args) -> "MetricSpec":
        kind = args.metric
        ground = _ground(args.ground_p)
        given = {name for name in ("f", "k", "p") if getattr(args, name) is not None}
        demanded = {"prokhorov": {"f"}, "kth-bottleneck": {"k"}, "wasserstein": {"p"}}.get(kind, set())
        extra = given - demanded
        if extra:
            raise SpecError(f"--metric {kind} does not take " + ", ".join("--" + e for e in sorted(extra)))
        f = k = p = None
        if kind == "prokhorov":
            try:
                f = ParamFunction.parse(args.f if args.f is not None else "poly:0,1")
            except ValueError as exc:
                raise SpecError(f"invalid --f: {exc}") from None
        elif kind == "kth-bottleneck":
            if args.k is None:
                raise SpecError("--metric kth-bottleneck requires --k")
            if args.k < 1:
                raise SpecError(f"--k must be >= 1, got {args.k}")
            k = args.k
        elif kind == "wasserstein":
            p = 1.0 if args.p is None else float(args.p)
            if not p >= 1:
                raise SpecError(f"--p must be >= 1, got {args.p}")
        return cls(kind, ground, f, k, p)

    @property
    def is_metric(self) -> bool:
        if self.kind == "prokhorov":
            return self.f.is_metric
        if self.kind == "kth-bottleneck":
            return self.k == 1
        return True

    def compute(self, X: PersistenceDiagram, Y: PersistenceDiagram, use_oracle: bool = False) -> float:
        m = self.ground
        if use_oracle:
            if self.kind == "prokhorov":
                return oracle.brute_prokhorov(X, Y, self.f, m)
            if self.kind == "bottleneck":
                return oracle.brute_prokhorov(X, Y, ParamFunction.const(1), m)
            if self.kind == "kth-bottleneck":
                return oracle.brute_prokhorov(X, Y, ParamFunction.const(self.k), m)
            if math.isinf(self.p):
                return oracle.brute_bottleneck(X, Y, m)
            return oracle.brute_wasserstein(X, Y, self.p, m)
        if self.kind == "prokhorov":
            return prokhorov_distance(X, Y, self.f, m)
        if self.kind == "bottleneck":
            return bottleneck_distance(X, Y, m)
        if self.kind == "kth-bottleneck":
            return kth_bottleneck(X, Y, self.k, m)
        return wasserstein_distance(X, Y, self.p, m)


def _ground(text) -> GroundMetric:
    try:
        return GroundMetric.parse(text)
    except ValueError as exc:
        raise SpecError(f"invalid --ground-p: {exc}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------


def cmd_profile(args) -> int:
    m = _ground(args.ground_p)
    X, Y = load_diagram(args.a), load_diagram(args.b)
    prof = full_profile(X, Y, m)
    text = prof.to_csv() if args.format == "csv" else prof.to_json() + "\n"
    _write(text, args.out)
    return EXIT_OK


def cmd_dist(args) -> int:
    spec = MetricSpec.from_args(args)
    X, Y = load_diagram(args.a), load_diagram(args.b)
    print(fmt(spec.compute(X, Y, use_oracle=args.oracle)))
    return EXIT_OK


_pool_state: dict = {}


def _pool_init(diagrams, spec):
    _pool_state["dgms"] = diagrams
    _pool_state["spec"] = spec


def _pool_pair(ij):
    i, j = ij
    dg = _pool_state["dgms"]
    return i, j, _pool_state["spec"].compute(dg[i], dg[j])


def distance_matrix(diagrams, spec: MetricSpec, threads: int = 1) -> np.ndarray:
    """Symmetric matrix of pairwise distances; identical for any ``threads``."""
    n = len(diagrams)
    M = np.zeros((n, n))
    pairs = list(itertools.combinations(range(n), 2))
    if threads <= 1 or len(pairs) <= 1:
        results = ((i, j, spec.compute(diagrams[i], diagrams[j])) for i, j in pairs)
        for i, j, v in results:
            M[i, j] = M[j, i] = v
        return M
    chunk = max(1, len(pairs) // (4 * threads))
    with ProcessPoolExecutor(max_workers=threads, initializer=_pool_init, initargs=(diagrams, spec)) as ex:
        results = list(ex.map(_pool_pair, pairs, chunksize=chunk))
    for i, j, v in results:
        M[i, j] = M[j, i] = v
    return M


def _collect_paths(entries) -> list[Path]:
    paths = []
    for e in entries:
        p = Path(e)
        if p.is_dir():
            paths.extend(sorted(q for q in p.iterdir() if q.is_file() and not q.name.startswith(".")))
        else:
            paths.append(p)
    return paths


def matrix_csv(names, M) -> str:
    buf = io.StringIO()
    buf.write("name," + ",".join(names) + "\n")
    for name, row in zip(names, M):
        buf.write(name + "," + ",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def cmd_matrix(args) -> int:
    spec = MetricSpec.from_args(args)
    if not spec.is_metric:
        raise SpecError(f"matrix requires a metric; {spec.kind} with these parameters is a query mode")
    if args.threads < 1:
        raise SpecError("--threads must be >= 1")
    paths = _collect_paths(args.paths)
    if len(paths) < 2:
        raise SpecError("matrix needs at least two diagrams")
    diagrams = [load_diagram(p) for p in paths]
    M = distance_matrix(diagrams, spec, args.threads)
    _write(matrix_csv([p.name for p in paths], M), args.out)
    return EXIT_OK


def run_check(X, Y, ps, qs, cs, m, triple=False) -> BoundsReport:
    report = BoundsReport()
    for p, q, c in itertools.product(ps, qs, cs):
        report.extend(audit_bounds(X, Y, p, q, c, m))
    if triple:
        report.extend(triangle_checks(X, midpoint_diagram(X, Y, m), Y, qs, cs, m))
    return report


def triangle_checks(X, Z, Y, qs, cs, m) -> BoundsReport:
    """Scaled triangle for D and the triangle inequality for pi_f through Z."""
    rep = BoundsReport()
    pxy = full_profile(X, Y, m)
    pxz = full_profile(X, Z, m)
    pzy = full_profile(Z, Y, m)
    ss = _interior(pxz.thresholds)
    ts = _interior(pzy.thresholds)
    for s in ss:
        for t in ts:
            rep.add(f"scaled_triangle[s={s:.6g},t={t:.6g}]", pxy(s + t), pxz(s) + pzy(t))
    for q, c in itertools.product(qs, cs):
        if int(q) != q or q < 1:
            continue
        f = ParamFunction.monomial(c, int(q))
        rep.add(
            f"prokhorov_triangle[{f.spec}]",
            prokhorov_distance(X, Y, f, m),
            prokhorov_distance(X, Z, f, m) + prokhorov_distance(Z, Y, f, m),
        )
    return rep


def _interior(ts):
    pts = [(a + b) / 2.0 for a, b in zip(ts, ts[1:])]
    pts.append(ts[-1] + 1.0)
    return pts


def cmd_check(args) -> int:
    m = _ground(args.ground_p)
    if any(p < 1 for p in args.p):
        raise SpecError("--p values must be >= 1")
    if any(int(q) != q or q < 1 for q in args.q):
        raise SpecError("--q values must be positive integers")
    if any(c <= 0 for c in args.c):
        raise SpecError("--c values must be positive")
    X, Y = load_diagram(args.a), load_diagram(args.b)
    report = run_check(X, Y, args.p, [int(q) for q in args.q], args.c, m, args.triple)
    print(report.format())
    bad = len(report.failures)
    if bad:
        print(f"{bad} of {len(report)} inequalities VIOLATED")
        return EXIT_VIOLATION
    print(f"all {len(report)} inequalities hold")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _add_metric_flags(sp):
    sp.add_argument("--metric", choices=KINDS, default="prokhorov")
    sp.add_argument(
        "--f",
        default=None,
        help="parameter function: poly:0,c1,...,cm (c0 must be 0) or const:k. "
        "Preimages f^-1(k) are located to within one ulp.",
    )
    sp.add_argument("--k", type=int, default=None, help="rank for kth-bottleneck")
    sp.add_argument("--p", type=float, default=None, help="Wasserstein order (>= 1)")
    sp.add_argument("--ground-p", default="inf", help="order of the planar L_p ground metric (default inf)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pdmetric", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="full bottleneck profile of two diagrams")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--ground-p", default="inf")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("dist", help="one distance between two diagrams")
    sp.add_argument("a")
    sp.add_argument("b")
    _add_metric_flags(sp)
    sp.add_argument("--oracle", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("matrix", help="pairwise distance matrix as CSV")
    sp.add_argument("paths", nargs="+", help="diagram files or directories")
    _add_metric_flags(sp)
    sp.add_argument("--threads", type=int, default=1)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_matrix)

    sp = sub.add_parser("check", help="audit the proven inequalities on a pair")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--p", type=_float_list, default=[1.0, 2.0], help="Wasserstein orders, e.g. 1,2")
    sp.add_argument("--q", type=_float_list, default=[1.0, 2.0], help="exponents of f = c t^q")
    sp.add_argument("--c", type=_float_list, default=[1.0, 3.0], help="scales of f = c t^q")
    sp.add_argument("--triple", action="store_true", help="also check triangle inequalities through a midpoint diagram")
    sp.add_argument("--ground-p", default="inf")
    sp.set_defaults(func=cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DiagramParseError as exc:
        print(f"pdmetric: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except SpecError as exc:
        print(f"pdmetric: {exc}", file=sys.stderr)
        return EXIT_SPEC


if __name__ == "__main__":
    sys.exit(main())
