"""Edge-list multigraphs and the structural operations on them.

A :class:`MultiGraph` is a vertex count plus an ``(m, 2)`` integer array of
endpoint pairs. Self-loops and repeated pairs are allowed; a self-loop adds
2 to the degree of its vertex. Subgraph-producing operations relabel the
surviving vertices ``0..k-1`` in increasing order of their old labels and
keep the old labels in ``origin``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Optional

import numpy as np
from scipy import sparse
from scipy.sparse.csgraph import connected_components

from .dists import RngStream, geometric_array, sample_pgw_forest

_EMPTY_EDGES = np.zeros((0, 2), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class MultiGraph:
    vertex_count: int
    edges: np.ndarray
    origin: Optional[np.ndarray] = None

    def __post_init__(self):
        e = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= self.vertex_count):
            raise ValueError("edge endpoint out of range")
        e.setflags(write=False)
        object.__setattr__(self, "edges", e)
        object.__setattr__(self, "vertex_count", int(self.vertex_count))

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        return np.bincount(self.edges.ravel(), minlength=self.vertex_count).astype(np.int64)

    def canonical_edges(self) -> np.ndarray:
        """Edges with ``u <= v`` per row, rows sorted lexicographically."""
        if not self.edge_count:
            return _EMPTY_EDGES.copy()
        e = np.sort(self.edges, axis=1)
        order = np.lexsort((e[:, 1], e[:, 0]))
        return e[order]

    def same_as(self, other: "MultiGraph") -> bool:
        return (self.vertex_count == other.vertex_count
                and np.array_equal(self.canonical_edges(), other.canonical_edges()))

    def induced(self, keep: np.ndarray) -> "MultiGraph":
        """Subgraph induced by the boolean vertex mask ``keep``, relabelled."""
        keep = np.asarray(keep, dtype=bool)
        new_label = np.cumsum(keep) - 1
        emask = keep[self.edges[:, 0]] & keep[self.edges[:, 1]] if self.edge_count else np.zeros(0, bool)
        return MultiGraph(int(keep.sum()), new_label[self.edges[emask]], origin=np.flatnonzero(keep))


def configuration_pairing(stream: RngStream, degrees) -> MultiGraph:
    """Uniform pairing of half-edges: shuffle the stub list, pair neighbours."""
    degrees = np.asarray(degrees, dtype=np.int64)
    if np.any(degrees < 0):
        raise ValueError("degrees must be nonnegative")
    if int(degrees.sum()) % 2:
        raise ValueError("degree sum must be even for a perfect pairing")
    stubs = np.repeat(np.arange(len(degrees), dtype=np.int64), degrees)
    stream.gen.shuffle(stubs)
    return MultiGraph(len(degrees), stubs.reshape(-1, 2))


def _incidence(g: MultiGraph):
    """CSR-style vertex -> incident edge ids (a self-loop is listed twice)."""
    m = g.edge_count
    ends = g.edges.T.ravel()
    eids = np.concatenate([np.arange(m), np.arange(m)])
    order = np.argsort(ends, kind="stable")
    indptr = np.zeros(g.vertex_count + 1, dtype=np.int64)
    np.cumsum(np.bincount(ends, minlength=g.vertex_count), out=indptr[1:])
    return indptr, eids[order]


def _gather(indptr, flat, verts):
    starts = indptr[verts]
    counts = indptr[verts + 1] - starts
    total = int(counts.sum())
    if total == 0:
        return flat[:0]
    shift = np.repeat(starts - (np.cumsum(counts) - counts), counts)
    return flat[np.arange(total) + shift]


def two_core(g: MultiGraph):
    """Peel vertices of degree < 2 until none remain.

    Returns ``(core, mask)`` where ``mask[v]`` says whether ``v`` survived.
    Removal proceeds in rounds over the whole deficient frontier, which
    reaches the same fixed point as any sequential order.
    """
    n, m = g.vertex_count, g.edge_count
    deg = g.degrees()
    alive_v = np.ones(n, dtype=bool)
    alive_e = np.ones(m, dtype=bool)
    indptr, inc = _incidence(g)
    a, b = g.edges[:, 0], g.edges[:, 1]
    queue = np.flatnonzero(deg < 2)
    while queue.size:
        alive_v[queue] = False
        es = _gather(indptr, inc, queue)
        es = np.unique(es[alive_e[es]])
        if not es.size:
            break
        alive_e[es] = False
        ends = np.concatenate([a[es], b[es]])
        np.subtract.at(deg, ends, 1)
        cand = np.unique(ends)
        queue = cand[alive_v[cand] & (deg[cand] < 2)]
    return g.induced(alive_v), alive_v


def contract_kernel(core: MultiGraph):
    """Split a min-degree-2 multigraph into kernel, chain lengths and cycles.

    Every maximal chain through degree-2 vertices becomes one kernel edge and
    contributes its number of edges to ``path_lengths`` (aligned with
    ``kernel.edges``). Components without a vertex of degree >= 3 are pure
    cycles and only their lengths are kept. ``kernel.origin`` holds the core
    labels of the kernel vertices.
    """
    deg = core.degrees()
    if np.any(deg < 2):
        raise ValueError("contract_kernel needs every vertex to have degree >= 2")
    m = core.edge_count
    heavy = deg >= 3
    kernel_vertices = np.flatnonzero(heavy)
    if m == 0:
        return MultiGraph(0, _EMPTY_EDGES, origin=kernel_vertices), np.zeros(0, np.int64), []

    # two edge slots meeting at a degree-2 vertex belong to the same chain
    indptr, inc = _incidence(core)
    light = np.flatnonzero(~heavy)
    first = inc[indptr[light]]
    second = inc[indptr[light] + 1]
    links = sparse.coo_matrix((np.ones(len(light), dtype=np.int8), (first, second)), shape=(m, m))
    n_comp, comp = connected_components(links, directed=False)

    # order chains by their first edge so kernel edges follow core edge order
    first_edge = np.full(n_comp, m, dtype=np.int64)
    np.minimum.at(first_edge, comp, np.arange(m))
    rank = np.empty(n_comp, dtype=np.int64)
    order = np.argsort(first_edge, kind="stable")
    rank[order] = np.arange(n_comp)
    comp = rank[comp]
    lengths = np.bincount(comp, minlength=n_comp)

    ends = core.edges.T.ravel()
    slot_comp = np.concatenate([comp, comp])
    hit = heavy[ends]
    hit_comp, hit_vertex = slot_comp[hit], ends[hit]
    per_comp = np.bincount(hit_comp, minlength=n_comp)
    is_chain = per_comp == 2
    if np.any((per_comp != 0) & ~is_chain):
        raise AssertionError("chain with a number of heavy endpoints other than 0 or 2")
    srt = np.argsort(hit_comp, kind="stable")
    pair_vertices = hit_vertex[srt].reshape(-1, 2)

    relabel = np.full(core.vertex_count, -1, dtype=np.int64)
    relabel[kernel_vertices] = np.arange(len(kernel_vertices))
    kernel = MultiGraph(len(kernel_vertices), relabel[pair_vertices], origin=kernel_vertices)
    path_lengths = lengths[is_chain].astype(np.int64)
    cycles = sorted(int(x) for x in lengths[~is_chain])
    return kernel, path_lengths, cycles


def subdivide_with_lengths(kernel: MultiGraph, lengths) -> MultiGraph:
    """Replace kernel edge ``i`` by a path of ``lengths[i]`` edges.

    Kernel vertices keep their labels; the new internal vertices follow in
    kernel-edge order, and core edges are grouped by kernel edge.
    """
    lengths = np.asarray(lengths, dtype=np.int64)
    if len(lengths) != kernel.edge_count:
        raise ValueError("one length per kernel edge required")
    if np.any(lengths < 1):
        raise ValueError("path lengths must be >= 1")
    k = kernel.vertex_count
    extra = int((lengths - 1).sum())
    if kernel.edge_count == 0:
        return MultiGraph(k, _EMPTY_EDGES)
    starts = np.concatenate(([0], np.cumsum(lengths + 1)[:-1]))
    seq = np.empty(int((lengths + 1).sum()), dtype=np.int64)
    is_end = np.zeros(len(seq), dtype=bool)
    is_end[starts] = True
    is_end[starts + lengths] = True
    seq[starts] = kernel.edges[:, 0]
    seq[starts + lengths] = kernel.edges[:, 1]
    seq[~is_end] = np.arange(k, k + extra, dtype=np.int64)
    keep = np.ones(len(seq) - 1, dtype=bool)
    keep[(starts + lengths)[:-1]] = False  # steps that would join consecutive kernel edges
    edges = np.column_stack([seq[:-1][keep], seq[1:][keep]])
    return MultiGraph(k + extra, edges)


def subdivide_edges(stream: RngStream, kernel: MultiGraph, mu: float):
    """Subdivide each kernel edge into a path of Geom(1-mu) edges."""
    lengths = geometric_array(stream, mu, kernel.edge_count)
    return subdivide_with_lengths(kernel, lengths), lengths


def attach_trees(stream: RngStream, core: MultiGraph, mu: float, cap: int = 10**8):
    """Hang an independent Poisson(mu) Galton-Watson tree from every vertex.

    Tree vertices are appended after the core labels. ``tree_sizes[v]``
    counts the tree rooted at core vertex ``v`` including ``v`` itself.
    """
    c = core.vertex_count
    parent, root_of = sample_pgw_forest(stream, mu, c, cap=cap)
    t = len(parent)
    tree_edges = np.column_stack([parent, np.arange(c, c + t, dtype=np.int64)])
    graph = MultiGraph(c + t, np.concatenate([core.edges, tree_edges]))
    tree_sizes = 1 + np.bincount(root_of, minlength=c).astype(np.int64)
    return graph, tree_sizes


def component_labels(g: MultiGraph):
    n = g.vertex_count
    if g.edge_count:
        adj = sparse.coo_matrix((np.ones(g.edge_count, dtype=np.int8),
                                 (g.edges[:, 0], g.edges[:, 1])), shape=(n, n))
    else:
        adj = sparse.coo_matrix((n, n), dtype=np.int8)
    return connected_components(adj, directed=False)


def components(g: MultiGraph) -> list:
    """Vertex sets of the connected components, ordered by smallest member."""
    n_comp, labels = component_labels(g)
    order = np.argsort(labels, kind="stable")
    bounds = np.cumsum(np.bincount(labels, minlength=n_comp))[:-1]
    groups = np.split(order, bounds)
    groups.sort(key=lambda s: int(s[0]))
    return groups


def largest_component(g: MultiGraph) -> MultiGraph:
    """Largest component; ties go to the one holding the smallest label."""
    if g.vertex_count == 0:
        return MultiGraph(0, _EMPTY_EDGES, origin=np.zeros(0, np.int64))
    n_comp, labels = component_labels(g)
    sizes = np.bincount(labels, minlength=n_comp)
    min_label = np.full(n_comp, g.vertex_count, dtype=np.int64)
    np.minimum.at(min_label, labels, np.arange(g.vertex_count))
    best = np.lexsort((min_label, -sizes))[0]
    return g.induced(labels == best)


def is_simple(g: MultiGraph) -> bool:
    if g.edge_count == 0:
        return True
    e = g.edges
    if np.any(e[:, 0] == e[:, 1]):
        return False
    key = np.minimum(e[:, 0], e[:, 1]) * g.vertex_count + np.maximum(e[:, 0], e[:, 1])
    return len(np.unique(key)) == len(key)


def write_edgelist(g: MultiGraph, fh: IO[str]) -> None:
    """One ``u v`` line per edge, ``u <= v``, lines sorted, 0-indexed."""
    e = g.canonical_edges()
    if len(e):
        fh.write("\n".join(f"{u} {v}" for u, v in e.tolist()))
        fh.write("\n")


def read_edgelist(fh: IO[str], vertex_count: Optional[int] = None) -> MultiGraph:
    rows = []
    for lineno, line in enumerate(fh, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'u v', got {line!r}")
        rows.append((int(parts[0]), int(parts[1])))
    edges = np.asarray(rows, dtype=np.int64).reshape(-1, 2)
    if vertex_count is None:
        vertex_count = int(edges.max()) + 1 if len(edges) else 0
    return MultiGraph(vertex_count, edges)


@dataclass(eq=False)
class Anatomy:
    """A giant component cut into 2-core, kernel, chains, cycles and trees.

    ``core.origin`` gives the giant labels of core vertices, ``kernel.origin``
    the core labels of kernel vertices; ``tree_sizes`` is indexed by core
    label and ``path_lengths`` is aligned with ``kernel.edges``.
    """

    giant: MultiGraph
    core: MultiGraph
    kernel: MultiGraph
    path_lengths: np.ndarray
    disjoint_cycles: list
    tree_sizes: np.ndarray

    def validate(self) -> None:
        kdeg = self.kernel.degrees()
        if kdeg.size and kdeg.min() < 3:
            raise AssertionError("kernel vertex of degree < 3")
        if int(np.sum(self.path_lengths)) + sum(self.disjoint_cycles) != self.core.edge_count:
            raise AssertionError("chain lengths and cycles do not cover the core edges")
        if self.core.vertex_count and int(np.sum(self.tree_sizes)) != self.giant.vertex_count:
            raise AssertionError("tree sizes do not add up to the giant size")
        if len(self.tree_sizes) != self.core.vertex_count:
            raise AssertionError("one tree size per core vertex required")
