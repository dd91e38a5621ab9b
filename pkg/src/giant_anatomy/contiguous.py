"""Direct samplers for the contiguous model of the supercritical giant.

The giant is built in three steps: a random kernel from a Poisson degree
sequence (vertices of degree >= 3 only), each kernel edge stretched into a
path of Geom(1-mu) length, and a Poisson(mu) Galton-Watson tree hung from
every resulting vertex.

Parity of the kernel degree sum is handled either by rejection, redrawing
the degree vector for the same realized ``Lambda`` (redrawing ``Lambda``
too would change the conditional law of the degrees), or by giving one
vertex an extra self-loop.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dists import RngStream, poisson_array
from .graph import (
    Anatomy,
    MultiGraph,
    attach_trees,
    configuration_pairing,
    is_simple,
    subdivide_edges,
)
from .scalar_math import ModelParams

PARITY_POLICIES = ("reject", "selfloop")


class ResampleLimitExceeded(RuntimeError):
    pass


@dataclass
class DegreeDraw:
    lambda_draw: float
    degrees: np.ndarray
    threshold: int
    parity: str
    parity_fixups: int = 0
    # vertex (original index) that got k-1 half-edges plus a self-loop, or -1
    selfloop_vertex: int = -1
    counts: dict = field(init=False)

    def __post_init__(self):
        vals, cnt = np.unique(self.degrees, return_counts=True)
        self.counts = {int(k): int(c) for k, c in zip(vals, cnt)}

    @property
    def kept(self) -> np.ndarray:
        """Original indices of the vertices at or above the threshold."""
        return np.flatnonzero(self.degrees >= self.threshold)

    def stub_counts(self) -> np.ndarray:
        """Half-edges per kept vertex, after the self-loop fix-up if any."""
        kept = self.kept
        stubs = self.degrees[kept].copy()
        if self.selfloop_vertex >= 0:
            stubs[np.searchsorted(kept, self.selfloop_vertex)] -= 1
        return stubs


def draw_degrees(stream: RngStream, params: ModelParams, threshold: int = 3,
                 parity: str = "reject") -> DegreeDraw:
    """Draw ``Lambda ~ N(lam - mu, 1/n)`` and i.i.d. Poisson(Lambda) degrees."""
    if threshold not in (2, 3):
        raise ValueError("threshold must be 2 or 3")
    if parity not in PARITY_POLICIES:
        raise ValueError(f"parity must be one of {PARITY_POLICIES}")
    n = params.n
    fixups = 0
    while True:
        lam_draw = params.lambda0 + stream.gen.standard_normal() / math.sqrt(n)
        if lam_draw > 0:
            break
        fixups += 1
    while True:
        deg = poisson_array(stream, lam_draw, n)
        odd = int(deg[deg >= threshold].sum()) % 2
        if not odd or parity == "selfloop":
            break
        fixups += 1
    draw = DegreeDraw(lam_draw, deg, threshold, parity, fixups)
    if parity == "selfloop" and odd:
        kept = draw.kept
        w = deg[kept].astype(float)
        draw.selfloop_vertex = int(kept[stream.gen.choice(len(kept), p=w / w.sum())])
        draw.parity_fixups += 1
    return draw


def _pair_kept(stream: RngStream, draw: DegreeDraw) -> MultiGraph:
    kept = draw.kept
    g = configuration_pairing(stream, draw.stub_counts())
    edges = g.edges
    if draw.selfloop_vertex >= 0:
        # the loop is an ordinary edge here, so that vertex ends up with degree k+1
        v = np.searchsorted(kept, draw.selfloop_vertex)
        edges = np.concatenate([edges, [[v, v]]])
    return MultiGraph(len(kept), edges, origin=kept)


def sample_poisson_configuration(stream: RngStream, params: ModelParams,
                                 parity: str = "reject") -> MultiGraph:
    """Uniform multigraph on the Poisson(Lambda) degree sequence cut at 2."""
    return _pair_kept(stream, draw_degrees(stream, params, threshold=2, parity=parity))


def sample_poisson_geometric(stream: RngStream, params: ModelParams, parity: str = "reject"):
    """Kernel on degrees >= 3, then Geom(1-mu) subdivision of its edges.

    Returns ``(core, kernel, path_lengths)``; core labels start with the
    kernel vertices.
    """
    kernel = _pair_kept(stream, draw_degrees(stream, params, threshold=3, parity=parity))
    core, lengths = subdivide_edges(stream, kernel, params.mu)
    return core, kernel, lengths


def sample_giant(stream: RngStream, params: ModelParams, simple: bool = False,
                 parity: str = "reject", max_attempts: int = 1000):
    """Sample the contiguous giant and its anatomy.

    With ``simple=True`` the whole pipeline is redrawn until the output is a
    simple graph. Trees cannot create loops or repeated pairs, so the check
    is made on the core before the trees are grown.

    Returns ``(graph, anatomy)``.
    """
    for _ in range(max_attempts):
        core, kernel, lengths = sample_poisson_geometric(stream, params, parity=parity)
        if simple and not is_simple(core):
            continue
        graph, tree_sizes = attach_trees(stream, core, params.mu)
        core = MultiGraph(core.vertex_count, core.edges, origin=np.arange(core.vertex_count))
        kernel = MultiGraph(kernel.vertex_count, kernel.edges,
                            origin=np.arange(kernel.vertex_count))
        anatomy = Anatomy(graph, core, kernel, lengths, [], tree_sizes)
        return graph, anatomy
    raise ResampleLimitExceeded(
        f"no simple sample in {max_attempts} attempts (n={params.n}, lambda={params.lam})")
