"""Identity suite over all small graphs: fast paths against enumeration and measure-side formulas."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx

from . import _bruteforce as brute
from ._errors import NonRealRootError
from .counting import (
    independence_coefficients,
    independence_stats,
    matching_coefficients,
    matching_stats,
    verify_cycle_sum_identity,
    verify_transfer_identity,
)
from .generators import random_graph
from .graph import Graph
from .measures import (
    dobrushin_bound_check,
    heilmann_lieb_check,
    independence_measure,
    matching_measure,
    pm_entropy_from_measure,
    stats_from_measure,
)

__all__ = ["SuiteReport", "atlas_graphs", "random_suite_graphs", "check_graph", "run_identity_suite"]

REL_TOL = 1e-9
CYCLE_SUM_MAX_VERTICES = 10


@dataclass
class SuiteReport:
    graphs: int = 0
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    independence_skipped: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool, label: str) -> None:
        self.checks[name] = self.checks.get(name, 0) + 1
        if not passed:
            self.failures.append(f"{label}: {name}")

    def to_json(self) -> dict:
        return {
            "graphs": self.graphs,
            "checks": dict(sorted(self.checks.items())),
            "failures": list(self.failures),
            "independence_skipped_nonreal": self.independence_skipped,
            "ok": self.ok,
        }


def atlas_graphs(max_vertices: int = 7) -> Iterator[Graph]:
    """Every graph on 1..7 vertices up to isomorphism, in atlas order."""
    for h in nx.graph_atlas_g():
        n = h.number_of_nodes()
        if 1 <= n <= max_vertices:
            yield Graph(n, h.edges())


def random_suite_graphs(count: int = 200, max_vertices: int = 12, max_degree: int = 5, seed: int = 0) -> Iterator[Graph]:
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, max_vertices)
        yield random_graph(n, max_degree, rng.uniform(0.1, 0.7), rng.randrange(2**32))


def _close(a: float, b: float) -> bool:
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= REL_TOL * abs(b) + 1e-15


def check_graph(g: Graph, report: SuiteReport, label: str = "") -> None:
    label = label or repr(g)
    report.graphs += 1
    m = matching_coefficients(g).coeffs
    i = independence_coefficients(g).coeffs
    report.record("matching_coefficients", list(m) == brute.matching_counts(g), label)
    report.record("independence_coefficients", list(i) == brute.independent_counts(g), label)

    ms = matching_stats(g)
    rho = matching_measure(g)
    st = stats_from_measure(rho, "matching")
    report.record("rho_mass", rho.total_mass == 1, label)
    report.record(
        "matching_stats",
        _close(st.entropy, ms.entropy_per_vertex)
        and _close(st.expectation, ms.expected_size_normalized)
        and _close(st.variance, ms.variance_normalized)
        and st.ratio == ms.matching_ratio,
        label,
    )
    report.record("pm_entropy", _close(pm_entropy_from_measure(rho), ms.pm_entropy_per_vertex), label)

    try:
        sigma = independence_measure(g)
    except NonRealRootError:
        report.independence_skipped += 1
    else:
        ist = independence_stats(g)
        sst = stats_from_measure(sigma, "independence")
        report.record(
            "independence_stats",
            _close(sst.entropy, ist.entropy_per_vertex)
            and _close(sst.expectation, ist.expected_size_normalized)
            and _close(sst.variance, ist.variance_normalized)
            and sst.ratio == ist.independence_ratio,
            label,
        )

    report.record("transfer_identity", verify_transfer_identity(g), label)
    if g.num_vertices <= CYCLE_SUM_MAX_VERTICES:
        report.record("cycle_sum_identity", verify_cycle_sum_identity(g), label)
    report.record("heilmann_lieb", heilmann_lieb_check(g), label)
    report.record("dobrushin", dobrushin_bound_check(g), label)


def run_identity_suite(graphs: Iterable[Graph]) -> SuiteReport:
    report = SuiteReport()
    for k, g in enumerate(graphs):
        check_graph(g, report, f"graph #{k} {g!r}")
    return report
