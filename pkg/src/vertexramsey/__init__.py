"""Exact online vertex-Ramsey densities for small graphs, the optimal
Painter and Builder strategies derived from the underlying weight
computation, a deterministic game engine with an exhaustive oracle, and
Monte-Carlo simulation of online coloring of random graphs."""

from .density import DensityResult, m1, m1_bar, online_vertex_ramsey_density
from .graphs import Graph, enumerate_ordered_subgraphs, load_graph
from .weights import big_lambda, cw_full, cw_simplified

__all__ = [
    "DensityResult",
    "Graph",
    "big_lambda",
    "cw_full",
    "cw_simplified",
    "enumerate_ordered_subgraphs",
    "load_graph",
    "m1",
    "m1_bar",
    "online_vertex_ramsey_density",
]
