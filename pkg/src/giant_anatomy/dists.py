"""Seeded variate generation.

Every sampler takes an :class:`RngStream`. A stream is identified by
``(seed, stream_id)``; the pair is fed to :class:`numpy.random.SeedSequence`
so distinct stream ids never share state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


class CapExceeded(RuntimeError):
    """A Galton-Watson simulation grew past its safety cap."""


@dataclass
class RngStream:
    seed: int = 0
    stream_id: int = 0
    gen: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        ss = np.random.SeedSequence(entropy=int(self.seed) & (2**64 - 1),
                                    spawn_key=(int(self.stream_id) & (2**64 - 1),))
        self.gen = np.random.Generator(np.random.PCG64(ss))

    def spawn(self, stream_id: int) -> "RngStream":
        return RngStream(self.seed, stream_id)


@dataclass(frozen=True)
class RootedTree:
    """Breadth-first labelled tree; ``parent[0] == -1`` marks the root."""

    parent: np.ndarray

    @property
    def size(self) -> int:
        return len(self.parent)

    def edges(self) -> np.ndarray:
        idx = np.arange(1, self.size)
        return np.column_stack([self.parent[1:], idx])


def sample_poisson(stream: RngStream, rate: float) -> int:
    """One Poisson(rate) draw: sequential inversion below rate 10."""
    if rate < 0 or not math.isfinite(rate):
        raise ValueError(f"Poisson rate must be a finite number >= 0, got {rate!r}")
    if rate == 0:
        return 0
    if rate >= 10:
        return int(stream.gen.poisson(rate))
    u = stream.gen.random()
    k = 0
    p = math.exp(-rate)
    cdf = p
    while u > cdf:
        k += 1
        p *= rate / k
        cdf += p
        if p == 0.0:
            # float cdf saturated below u; only reachable for u within 1e-16 of 1
            break
    return k


def poisson_array(stream: RngStream, rate: float, size: int) -> np.ndarray:
    if rate < 0:
        raise ValueError(f"Poisson rate must be >= 0, got {rate!r}")
    return stream.gen.poisson(rate, size=size).astype(np.int64)


def geometric_array(stream: RngStream, mu: float, size: int) -> np.ndarray:
    """Geom(1-mu) on {1, 2, ...} by inversion: ``1 + floor(log U / log mu)``."""
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu!r}")
    u = 1.0 - stream.gen.random(size)  # in (0, 1]
    return 1 + np.floor(np.log(u) / math.log(mu)).astype(np.int64)


def sample_geometric(stream: RngStream, mu: float) -> int:
    return int(geometric_array(stream, mu, 1)[0])


def sample_gaussian(stream: RngStream, mean: float, variance: float) -> float:
    if not variance > 0:
        raise ValueError(f"variance must be > 0, got {variance!r}")
    return float(mean + math.sqrt(variance) * stream.gen.standard_normal())


def sample_pgw_tree(stream: RngStream, mu: float, cap: int = 10**8) -> RootedTree:
    """Simulate a Poisson(mu) Galton-Watson family tree breadth first.

    Node ``i`` receives ``Poisson(mu)`` children, labelled consecutively, so
    ``parent[i] < i`` for every non-root node.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu!r}")
    parent = [-1]
    i = 0
    while i < len(parent):
        kids = sample_poisson(stream, mu)
        if len(parent) + kids > cap:
            raise CapExceeded(f"Galton-Watson tree exceeded cap={cap}")
        parent.extend([i] * kids)
        i += 1
    return RootedTree(np.asarray(parent, dtype=np.int64))


def sample_pgw_forest(stream: RngStream, mu: float, roots: int, cap: int = 10**8):
    """Grow ``roots`` independent Poisson(mu) Galton-Watson trees at once.

    Generations are expanded in lockstep across all trees. Returns
    ``(parent, root_of)`` for the non-root nodes only: non-root node ``j``
    gets global label ``roots + j``, its parent label is ``parent[j]`` (a
    root label ``< roots`` or an earlier non-root label) and ``root_of[j]``
    is the root it hangs from.
    """
    if not 0.0 < mu < 1.0:
        raise ValueError(f"mu must lie in (0, 1), got {mu!r}")
    frontier = np.arange(roots, dtype=np.int64)
    frontier_root = frontier
    parents, root_ids = [], []
    next_label = roots
    total = 0
    while frontier.size:
        kids = stream.gen.poisson(mu, size=frontier.size)
        born = int(kids.sum())
        if born == 0:
            break
        total += born
        if roots + total > cap:
            raise CapExceeded(f"Galton-Watson forest exceeded cap={cap}")
        par = np.repeat(frontier, kids)
        rts = np.repeat(frontier_root, kids)
        parents.append(par)
        root_ids.append(rts)
        frontier = np.arange(next_label, next_label + born, dtype=np.int64)
        frontier_root = rts
        next_label += born
    if not parents:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy()
    return np.concatenate(parents), np.concatenate(root_ids)
