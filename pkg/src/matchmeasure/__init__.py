"""Matching and independence measures of finite graphs, their limits and local statistics.

Heavier submodules (``measures``, ``mckay``, ``covers``, ``expander``,
``bs_stats``, ``estimators``) are imported on demand.
"""

from ._errors import GenerationError, NonRealRootError, ResourceCapError, RootSolverError
from .counting import (
    edge_probability,
    independence_coefficients,
    independence_stats,
    matching_coefficients,
    matching_stats,
    pm_count,
)
from .generators import (
    large_girth_regular,
    make_complete,
    make_complete_bipartite,
    make_cycle,
    make_path,
    make_petersen,
    random_bipartite_regular,
    random_regular,
)
from .graph import Digraph, Graph, RootedBall, parse_graph, read_graph, write_graph

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "Digraph",
    "RootedBall",
    "parse_graph",
    "read_graph",
    "write_graph",
    "make_path",
    "make_cycle",
    "make_complete",
    "make_complete_bipartite",
    "make_petersen",
    "random_regular",
    "random_bipartite_regular",
    "large_girth_regular",
    "matching_coefficients",
    "independence_coefficients",
    "matching_stats",
    "independence_stats",
    "pm_count",
    "edge_probability",
    "ResourceCapError",
    "RootSolverError",
    "NonRealRootError",
    "GenerationError",
]
