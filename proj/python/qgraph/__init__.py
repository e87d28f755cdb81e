"""Planar quantum graphs: spectra, transition moments and hyperpolarizabilities."""

import json

from ._qgraph import (
    Graph,
    __version__,
    delta_wire,
    extreme_f,
    extreme_g,
    moments,
    sample_graph,
    secular_3star,
    spectrum,
    tensors,
    topology_classes,
)
from ._qgraph import ensemble as _ensemble

__all__ = [
    "Graph",
    "__version__",
    "delta_wire",
    "ensemble",
    "extreme_f",
    "extreme_g",
    "load_graph",
    "moments",
    "sample_graph",
    "secular_3star",
    "spectrum",
    "tensors",
    "topology_classes",
]


def ensemble(topology, samples=1000, seed=1, states=30, threads=1):
    """Run a Monte Carlo ensemble and return its summary as a dict."""
    return json.loads(_ensemble(topology, samples, seed, states, threads))


def load_graph(source):
    """Graph from a path, a JSON string or an already parsed dict."""
    if isinstance(source, dict):
        return Graph.from_json(json.dumps(source))
    text = str(source)
    if text.lstrip().startswith("{"):
        return Graph.from_json(text)
    return Graph.load(text)
