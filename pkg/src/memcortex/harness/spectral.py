"""Graph-spectral health: the Fiedler value of a weighted co-access graph.

The Fiedler value (algebraic connectivity) is the second-smallest eigenvalue
of the graph Laplacian L = D - W. It is zero exactly when the graph is
disconnected and grows as the graph becomes better knit; adding edge weight
can only raise it (L gains a PSD term), which makes it a clean scalar proxy
for how much a consolidation pass tightened the store.
"""

from __future__ import annotations

import numpy as np


def laplacian(node_ids: list[int], edges: list[tuple[int, int, float]]) -> np.ndarray:
    index = {n: i for i, n in enumerate(sorted(node_ids))}
    n = len(index)
    lap = np.zeros((n, n), dtype=np.float64)
    for a, b, w in edges:
        if a not in index or b not in index or a == b:
            continue
        i, j = index[a], index[b]
        lap[i, j] -= w
        lap[j, i] -= w
        lap[i, i] += w
        lap[j, j] += w
    return lap


def fiedler_value(node_ids: list[int], edges: list[tuple[int, int, float]]) -> float:
    """Second-smallest Laplacian eigenvalue; 0 for disconnected graphs."""
    if len(node_ids) < 2:
        raise ValueError("need at least two nodes")
    lap = laplacian(node_ids, edges)
    eigenvalues = np.linalg.eigvalsh(lap)
    # eigvalsh returns ascending eigenvalues of the symmetric Laplacian.
    value = float(eigenvalues[1])
    return max(0.0, value)


def fiedler_of_graph(graph) -> float:
    """Fiedler value of a SynapticGraph's weighted adjacency."""
    doc = graph.to_adjacency()
    nodes = doc["nodes"]
    edges = [(e["src"], e["dst"], e["w"]) for e in doc["edges"]]
    return fiedler_value(nodes, edges)
