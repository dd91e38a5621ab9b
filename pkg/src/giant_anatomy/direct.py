"""Ground-truth route: sample G(n, p) and dissect its largest component."""
from __future__ import annotations

import math

import numpy as np

from .dists import RngStream
from .graph import (
    Anatomy,
    MultiGraph,
    component_labels,
    contract_kernel,
    largest_component,
    two_core,
)


def _pair_from_index(k: np.ndarray, n: int):
    """Invert the lexicographic rank of pairs ``(i, j)``, ``i < j < n``."""
    # rows before row i hold off(i) = i*(2n - i - 1)/2 pairs
    kf = k.astype(np.float64)
    b = 2.0 * n - 1.0
    i = np.floor((b - np.sqrt(b * b - 8.0 * kf)) / 2.0).astype(np.int64)
    i = np.clip(i, 0, n - 2)

    def off(r):
        return r * (2 * n - r - 1) // 2

    # float rounding can be off by one either way
    for _ in range(2):
        i = np.where(off(i) > k, i - 1, i)
        i = np.where(off(i + 1) <= k, i + 1, i)
    j = k - off(i) + i + 1
    return i, j


def sample_gnp(stream: RngStream, n: int, p: float) -> MultiGraph:
    """Simple G(n, p) by geometric skips over the lexicographic pair order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0, 1)")
    total = n * (n - 1) // 2
    if total == 0:
        return MultiGraph(n, np.zeros((0, 2), np.int64))
    log_q = math.log1p(-p)
    chunks = []
    pos = -1
    batch = max(16, int(total * p * 1.05 + 10 * math.sqrt(total * p) + 16))
    while True:
        u = 1.0 - stream.gen.random(batch)
        gaps = 1 + np.floor(np.log(u) / log_q).astype(np.int64)
        idx = pos + np.cumsum(gaps)
        inside = idx < total
        chunks.append(idx[inside])
        if not inside.all():
            break
        pos = int(idx[-1])
        batch = max(16, batch // 4)
    k = np.concatenate(chunks)
    i, j = _pair_from_index(k, n)
    return MultiGraph(n, np.column_stack([i, j]))


def extract_anatomy(g: MultiGraph) -> Anatomy:
    """Cut the largest component of ``g`` into core, kernel, chains and trees.

    Trees are found as components of the giant after deleting core-core
    edges: each such component holds exactly one core vertex, its root.
    """
    if g.edge_count == 0:
        raise ValueError("graph has no edges")
    giant = largest_component(g)
    core, in_core = two_core(giant)
    kernel, lengths, cycles = contract_kernel(core)
    e = giant.edges
    hanging = ~(in_core[e[:, 0]] & in_core[e[:, 1]])
    forest = MultiGraph(giant.vertex_count, e[hanging])
    _, labels = component_labels(forest)
    sizes = np.bincount(labels)
    core_labels = np.flatnonzero(in_core)
    tree_sizes = sizes[labels[core_labels]].astype(np.int64)
    core = MultiGraph(core.vertex_count, core.edges, origin=core_labels)
    return Anatomy(giant, core, kernel, lengths, cycles, tree_sizes)
