"""scikit-learn transformers over collections of graphs.

Both transformers accept a sequence of :class:`~matchmeasure.graph.Graph`
or ``networkx.Graph`` objects and return dense float feature matrices, so
they slot into pipelines next to ordinary estimators.
"""

from __future__ import annotations

from collections import Counter

import networkx as nx
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .bs_stats import ball_distribution
from .counting import matching_stats
from .graph import Graph
from .measures import matching_measure, pm_entropy_from_measure, stats_from_measure

__all__ = ["check_graphs", "MatchingStatistics", "BallProfileVectorizer"]


def check_graphs(X) -> list:
    """Convert input to a list of :class:`Graph`; networkx graphs are relabelled 0..n-1 in node order."""
    if isinstance(X, (Graph, nx.Graph)):
        raise TypeError("expected a sequence of graphs, got a single graph")
    out = []
    for item in X:
        if isinstance(item, Graph):
            out.append(item)
        elif isinstance(item, nx.Graph):
            index = {v: i for i, v in enumerate(item.nodes())}
            out.append(Graph(len(index), [(index[u], index[v]) for u, v in item.edges()]))
        else:
            raise TypeError(f"unsupported graph type {type(item).__name__}")
    if not out:
        raise ValueError("need at least one graph")
    return out


class MatchingStatistics(TransformerMixin, BaseEstimator):
    """Per-vertex matching statistics as features.

    Parameters
    ----------
    route : {"coefficients", "measure"}
        Exact counting, or integration against the matching measure.
    include_pm : bool
        Append ln pm / v (``-inf`` when there is no perfect matching).
    """

    def __init__(self, route: str = "coefficients", include_pm: bool = True):
        self.route = route
        self.include_pm = include_pm

    def fit(self, X, y=None):
        if self.route not in ("coefficients", "measure"):
            raise ValueError(f"unknown route {self.route!r}")
        check_graphs(X)
        self.n_features_out_ = 5 if self.include_pm else 4
        return self

    def _row(self, g: Graph) -> list:
        if self.route == "coefficients":
            st = matching_stats(g)
            row = [st.entropy_per_vertex, st.expected_size_normalized, st.variance_normalized, float(st.matching_ratio)]
            pm = st.pm_entropy_per_vertex
        else:
            rho = matching_measure(g)
            st = stats_from_measure(rho, "matching")
            row = [st.entropy, st.expectation, st.variance, float(st.ratio)]
            pm = pm_entropy_from_measure(rho)
        return row + [pm] if self.include_pm else row

    def transform(self, X):
        check_is_fitted(self, "n_features_out_")
        return np.array([self._row(g) for g in check_graphs(X)], dtype=float)

    def get_feature_names_out(self, input_features=None):
        names = ["lnM_over_v", "Egamma_over_v", "Var_over_v", "nu_over_v"]
        if self.include_pm:
            names.append("lnpm_over_v")
        return np.array(names, dtype=object)


class BallProfileVectorizer(TransformerMixin, BaseEstimator):
    """Frequencies of rooted r-ball types, vocabulary learned in ``fit``.

    Types unseen during ``fit`` are pooled in a final ``other`` column, so
    every row sums to 1.
    """

    def __init__(self, r: int = 2):
        self.r = r

    def fit(self, X, y=None):
        totals = Counter()
        for g in check_graphs(X):
            totals.update(ball_distribution(g, self.r).counts)
        self.vocabulary_ = {sig: i for i, (sig, _) in enumerate(sorted(totals.items(), key=lambda kv: (-kv[1], kv[0])))}
        return self

    def transform(self, X):
        check_is_fitted(self, "vocabulary_")
        graphs = check_graphs(X)
        out = np.zeros((len(graphs), len(self.vocabulary_) + 1))
        for row, g in enumerate(graphs):
            dist = ball_distribution(g, self.r)
            for sig, c in dist.counts.items():
                out[row, self.vocabulary_.get(sig, len(self.vocabulary_))] += c / dist.total
        return out

    def get_feature_names_out(self, input_features=None):
        check_is_fitted(self, "vocabulary_")
        return np.array([f"ball_r{self.r}_{i}" for i in range(len(self.vocabulary_))] + ["other"], dtype=object)
