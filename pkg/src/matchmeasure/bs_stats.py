"""Local (r-ball) statistics and the convergence / divergence experiment harness.

Ball distributions are exact: every vertex is a root, and balls are
identified up to rooted isomorphism by their canonical signature.
"""

from __future__ import annotations

import csv
import io
import json
import math
import random
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .canonical import canonical_signature
from .counting import MAX_PERMANENT_SIDE, edge_probability, matching_stats, pm_count
from .covers import build_gap_pair, build_skewed_graph
from .generators import (
    large_girth_regular,
    make_complete_bipartite,
    make_cycle,
    random_bipartite_regular,
    random_regular,
)
from .graph import MAX_CYCLE_LENGTH, Graph, count_cycles, disjoint_union, extract_ball, girth, vertices_within
from .mckay import theorem_limits

__all__ = [
    "BallDistribution",
    "ExperimentRow",
    "FamilySpec",
    "CSV_HEADER",
    "FAMILIES",
    "ball_distribution",
    "tv_distance",
    "locality_bound",
    "make_family_graph",
    "load_manifest",
    "run_convergence_experiment",
    "rows_to_csv",
    "run_divergence_experiment",
]


@dataclass(frozen=True)
class BallDistribution:
    r: int
    counts: dict
    total: int

    def frequency(self, signature: bytes) -> Fraction:
        return Fraction(self.counts.get(signature, 0), self.total)

    @property
    def num_types(self) -> int:
        return len(self.counts)

    def to_json(self) -> dict:
        types = sorted(self.counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return {
            "r": self.r,
            "total": self.total,
            "types": [{"signature": sig.hex(), "count": c, "freq": str(Fraction(c, self.total))} for sig, c in types],
        }


def ball_distribution(g: Graph, r: int) -> BallDistribution:
    """Exact distribution of rooted r-ball types over all vertices."""
    if g.num_vertices == 0:
        raise ValueError("empty graph has no ball distribution")
    counts = Counter(canonical_signature(extract_ball(g, v, r)) for v in range(g.num_vertices))
    return BallDistribution(r, dict(counts), g.num_vertices)


def tv_distance(a: BallDistribution, b: BallDistribution) -> Fraction:
    if a.r != b.r:
        raise ValueError(f"radius mismatch: {a.r} vs {b.r}")
    keys = set(a.counts) | set(b.counts)
    return sum((abs(a.frequency(k) - b.frequency(k)) for k in keys), Fraction(0)) / 2


def locality_bound(before: Graph, after: Graph, touched: Iterable[int], r: int) -> Fraction:
    """Fraction of vertices within distance r of ``touched`` in either graph.

    Only those roots can see a different r-ball, so this bounds the TV
    distance when ``before`` and ``after`` share their vertex set.
    """
    if before.num_vertices != after.num_vertices:
        raise ValueError("graphs must share the vertex set")
    touched = list(touched)
    near = set(vertices_within(before, touched, r)) | set(vertices_within(after, touched, r))
    return Fraction(len(near), before.num_vertices)


# convergence harness -------------------------------------------------------------

FAMILIES = ("large_girth_regular", "random_regular", "random_bipartite_regular", "cycle", "disjoint_k33")

CSV_HEADER = (
    "id",
    "v",
    "girth",
    "lnM_over_v",
    "Egamma_over_v",
    "Var_over_v",
    "nu_over_v",
    "lnpm_over_v",
    "limit_entropy",
    "gap_entropy",
    "limit_expectation",
    "gap_expectation",
    "limit_variance",
    "gap_variance",
    "limit_pm",
    "gap_pm",
    "short_cycles",
    "tree_fraction",
    "family",
    "d",
)


@dataclass(frozen=True)
class FamilySpec:
    family: str
    d: int = 3
    g_min: int = 3

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; choose from {', '.join(FAMILIES)}")

    @property
    def regular_degree(self) -> Optional[int]:
        if self.family in ("cycle",):
            return 2
        if self.family == "disjoint_k33":
            return 3
        return self.d


@dataclass(frozen=True)
class ExperimentRow:
    id: str
    v: int
    girth: float
    lnM_over_v: float
    Egamma_over_v: float
    Var_over_v: float
    nu_over_v: Fraction
    lnpm_over_v: float
    limit_entropy: Optional[float]
    gap_entropy: Optional[float]
    limit_expectation: Optional[float]
    gap_expectation: Optional[float]
    limit_variance: Optional[float]
    gap_variance: Optional[float]
    limit_pm: Optional[float]
    gap_pm: Optional[float]
    short_cycles: str
    tree_fraction: Fraction
    family: str
    d: int


def _graph_seed(seed: int, v: int) -> int:
    return seed * 1_000_003 + v


def make_family_graph(spec: FamilySpec, v: int, seed: int) -> Graph:
    s = _graph_seed(seed, v)
    if spec.family == "large_girth_regular":
        return large_girth_regular(v, spec.d, spec.g_min, s)
    if spec.family == "random_regular":
        return random_regular(v, spec.d, s)
    if spec.family == "random_bipartite_regular":
        if v % 2:
            raise ValueError("bipartite family needs an even vertex count")
        return random_bipartite_regular(v // 2, spec.d, s)
    if spec.family == "cycle":
        return make_cycle(v)
    if v % 6:
        raise ValueError("disjoint_k33 needs a multiple of 6 vertices")
    g = make_complete_bipartite(3, 3)
    out = g
    for _ in range(v // 6 - 1):
        out = disjoint_union(out, g)
    return out


def load_manifest(source) -> dict:
    """Manifest from a dict, a JSON string or a path."""
    if isinstance(source, dict):
        data = dict(source)
    else:
        text = str(source)
        if not text.lstrip().startswith("{"):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        data = json.loads(text)
    unknown = set(data) - {"family", "d", "g_min", "sizes", "r", "seed"}
    if unknown:
        raise ValueError(f"unknown manifest keys: {sorted(unknown)}")
    return {
        "spec": FamilySpec(data["family"], int(data.get("d", 3)), int(data.get("g_min", 3))),
        "sizes": [int(s) for s in data["sizes"]],
        "r": int(data.get("r", 2)),
        "seed": int(data.get("seed", 0)),
    }


def _short_cycle_profile(g: Graph, r: int) -> str:
    top = min(2 * r + 1, MAX_CYCLE_LENGTH)
    return ";".join(f"{k}:{count_cycles(g, k)}" for k in range(3, top + 1))


def _tree_fraction(g: Graph, r: int) -> Fraction:
    trees = sum(1 for v in range(g.num_vertices) if _is_tree(extract_ball(g, v, r).graph))
    return Fraction(trees, g.num_vertices)


def _is_tree(g: Graph) -> bool:
    return g.num_edges == g.num_vertices - 1


def _row(args) -> ExperimentRow:
    spec, v, r, seed = args
    g = make_family_graph(spec, v, seed)
    st = matching_stats(g)
    d = spec.regular_degree
    limits = theorem_limits(d) if d is not None and d >= 3 and g.is_regular(d) else None

    def lim(key):
        return None if limits is None else limits[key]

    def gap(x, key):
        if limits is None or not math.isfinite(x):
            return None
        return abs(x - limits[key])

    return ExperimentRow(
        id=f"{spec.family}-d{spec.d}-v{v}-s{seed}",
        v=g.num_vertices,
        girth=girth(g),
        lnM_over_v=st.entropy_per_vertex,
        Egamma_over_v=st.expected_size_normalized,
        Var_over_v=st.variance_normalized,
        nu_over_v=Fraction(st.matching_ratio),
        lnpm_over_v=st.pm_entropy_per_vertex,
        limit_entropy=lim("entropy_limit"),
        gap_entropy=gap(st.entropy_per_vertex, "entropy_limit"),
        limit_expectation=lim("expectation_limit"),
        gap_expectation=gap(st.expected_size_normalized, "expectation_limit"),
        limit_variance=lim("variance_limit"),
        gap_variance=gap(st.variance_normalized, "variance_limit"),
        limit_pm=lim("pm_entropy_limit"),
        gap_pm=gap(st.pm_entropy_per_vertex, "pm_entropy_limit"),
        short_cycles=_short_cycle_profile(g, r),
        tree_fraction=_tree_fraction(g, r),
        family=spec.family,
        d=d if d is not None else spec.d,
    )


def run_convergence_experiment(
    family: FamilySpec, sizes: Sequence[int], r: int, seed: int = 0, threads: int = 1
) -> list:
    """One row per size, in the given order; rows never depend on ``threads``."""
    jobs = [(family, int(v), int(r), int(seed)) for v in sizes]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(_row, jobs))
    return [_row(j) for j in jobs]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "-inf" if x < 0 else "inf"
        return repr(x)
    return str(x)


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    names = [f.name for f in fields(ExperimentRow)]
    for row in rows:
        writer.writerow([_fmt(getattr(row, n)) for n in names])
    return buf.getvalue()


# divergence ----------------------------------------------------------------------


def run_divergence_experiment(d: int = 3, seed: int = 0, r: int = 1, base: str = "complete") -> dict:
    """Pair 2G / G~ that look alike locally but differ in perfect-matching entropy.

    ``base`` is ``"complete"`` (G = K_{d,d}) or ``"skewed"`` (the covering
    construction with an edge of probability above 1/2). ``seed`` picks the
    second edge f among the other edges at the shared endpoint. pm(G~) is
    counted directly when feasible; otherwise only the exact identity value
    is reported and ``counted`` is false.
    """
    if base == "complete":
        g = make_complete_bipartite(d, d)
        e = (0, d)
    elif base == "skewed":
        sk = build_skewed_graph(d)
        g, e = sk.graph, sk.edge
    else:
        raise ValueError("base must be 'complete' or 'skewed'")
    a = e[0]
    others = sorted(w for w in g.adjacency[a] if w != e[1])
    f = (a, random.Random(seed).choice(others))
    two, tilde = build_gap_pair(g, e, f)
    pm_g = pm_count(g)
    p_e = edge_probability(g, e)
    p_f = edge_probability(g, f)
    predicted = pm_g**2 * (p_e * p_f + (1 - p_e) * (1 - p_f))
    if predicted.denominator != 1:
        raise ArithmeticError("identity value is not an integer")
    predicted = predicted.numerator
    counted = tilde.num_vertices // 2 <= MAX_PERMANENT_SIDE
    pm_tilde = pm_count(tilde) if counted else predicted
    pm_two = pm_g**2
    v = two.num_vertices
    v_g = g.num_vertices
    touched = [a, e[1], v_g + a, v_g + f[1]]
    tv = tv_distance(ball_distribution(two, r), ball_distribution(tilde, r))
    bound = locality_bound(two, tilde, touched, r)
    return {
        "d": d,
        "base": base,
        "seed": seed,
        "e": list(e),
        "f": list(f),
        "v": v,
        "p_e": p_e,
        "p_f": p_f,
        "pm_2G": pm_two,
        "pm_tilde": pm_tilde,
        "pm_tilde_identity": predicted,
        "counted": counted,
        "identity_holds": pm_tilde == predicted,
        "pm_entropy_2G": math.log(pm_two) / v,
        "pm_entropy_tilde": math.log(pm_tilde) / v,
        "gap": (math.log(pm_two) - math.log(pm_tilde)) / v,
        "r": r,
        "tv": tv,
        "locality_bound": bound,
    }
