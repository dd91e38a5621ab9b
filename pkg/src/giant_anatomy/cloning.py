"""Poisson cloning and the cut-off line algorithm (COLA).

Each vertex owns a Poisson(lam) number of clones carrying i.i.d. uniform
coordinates in (0, lam]. COLA matches light clones (those of vertices with
at most one unmatched clone) against the highest unmatched clone below a
leftward-moving line; when no light clone is left, the unmatched clones
are exactly the half-edges of the 2-core and the line sits at ``tau``.

If the number of clones to pair is odd, one uniformly chosen clone becomes
a special self-loop. In a :class:`MultiGraph` it is stored as an ordinary
loop, so it adds 2 to its vertex's degree rather than 1.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dists import RngStream, poisson_array
from .graph import MultiGraph


@dataclass(frozen=True, eq=False)
class PoissonCell:
    n: int
    lam: float
    counts: np.ndarray
    coords: np.ndarray  # flat; vertex v owns coords[offsets[v]:offsets[v+1]], descending

    @property
    def offsets(self) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(self.counts)))

    @property
    def owner(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def clones(self, v: int) -> np.ndarray:
        off = self.offsets
        return self.coords[off[v]:off[v + 1]]

    def relabel(self, perm) -> "PoissonCell":
        """Cell whose vertex ``i`` is this cell's vertex ``perm[i]``."""
        perm = np.asarray(perm)
        off = self.offsets
        coords = [self.coords[off[v]:off[v + 1]] for v in perm]
        flat = np.concatenate(coords) if coords else self.coords[:0]
        return PoissonCell(self.n, self.lam, self.counts[perm], flat)


@dataclass(eq=False)
class ColaResult:
    tau: float
    matched_pairs: np.ndarray  # (k, 2) clone ids; (c, c) marks a leftover special loop
    surviving_clones: np.ndarray
    core_degree: dict
    exhausted: bool = False


def sample_cell(stream: RngStream, n: int, lam: float) -> PoissonCell:
    if n < 1 or not lam > 0:
        raise ValueError("need n >= 1 and lam > 0")
    counts = poisson_array(stream, lam, n)
    owner = np.repeat(np.arange(n, dtype=np.int64), counts)
    coords = lam * (1.0 - stream.gen.random(len(owner)))
    order = np.lexsort((-coords, owner))
    return PoissonCell(n, float(lam), counts, coords[order])


def cola(cell: PoissonCell) -> ColaResult:
    """Run the cut-off line algorithm on ``cell``.

    The light-clone stack is LIFO and filled in vertex order. Stale stack
    entries (clones matched as a partner after being pushed) are dropped on
    pop. If the line runs out of partners, the last light clone is left as a
    special loop, ``tau`` is 0 and ``exhausted`` is set.
    """
    counts = cell.counts
    off = cell.offsets
    total = cell.total
    owner = cell.owner.tolist()
    coords = cell.coords.tolist()
    # clone ids in descending coordinate order; the line only ever moves down it
    by_height = np.argsort(-cell.coords, kind="stable").tolist()
    last_clone = (off[1:] - 1).tolist()
    unmatched = counts.tolist()
    matched = [False] * total
    pairs = []
    line = float(cell.lam)
    exhausted = False

    stack = [last_clone[v] for v in range(cell.n) if unmatched[v] == 1]
    stack.reverse()  # vertex 0 on top
    ptr = 0
    while stack:
        c = stack.pop()
        if matched[c]:
            continue
        while ptr < total and matched[by_height[ptr]]:
            ptr += 1
        q = ptr
        if q < total and by_height[q] == c:
            q += 1
            while q < total and matched[by_height[q]]:
                q += 1
        if q >= total:
            matched[c] = True
            pairs.append((c, c))
            unmatched[owner[c]] -= 1
            line = 0.0
            exhausted = True
            continue
        d = by_height[q]
        line = coords[d]
        matched[c] = matched[d] = True
        pairs.append((c, d))
        unmatched[owner[c]] -= 1
        v = owner[d]
        unmatched[v] -= 1
        if unmatched[v] == 1:
            stack.append(last_clone[v])

    matched_arr = np.asarray(matched, dtype=bool)
    survivors = np.flatnonzero(~matched_arr)
    core_degree = {int(v): int(k) for v, k in enumerate(unmatched) if k > 0}
    return ColaResult(line, np.asarray(pairs, dtype=np.int64).reshape(-1, 2), survivors,
                      core_degree, exhausted)


def _pair_clones(stream: RngStream, clone_ids: np.ndarray):
    """Uniform perfect matching of ``clone_ids``; odd leftover -> special loop."""
    ids = np.asarray(clone_ids, dtype=np.int64).copy()
    special = np.zeros((0, 2), dtype=np.int64)
    if len(ids) % 2:
        k = int(stream.gen.integers(len(ids)))
        special = np.array([[ids[k], ids[k]]])
        ids = np.delete(ids, k)
    stream.gen.shuffle(ids)
    return np.concatenate([ids.reshape(-1, 2), special])


def pair_survivors(stream: RngStream, result: ColaResult) -> np.ndarray:
    return _pair_clones(stream, result.surviving_clones)


def core_from_cola(stream: RngStream, cell: PoissonCell, result: ColaResult,
                   survivor_pairs=None) -> MultiGraph:
    """Contract a uniform pairing of the surviving clones into the 2-core.

    Vertices are relabelled in index order; ``origin`` maps back to the cell.
    """
    if survivor_pairs is None:
        survivor_pairs = pair_survivors(stream, result)
    owner = cell.owner
    verts = np.unique(owner[result.surviving_clones])
    relabel = np.full(cell.n, -1, dtype=np.int64)
    relabel[verts] = np.arange(len(verts))
    edges = relabel[owner[survivor_pairs]] if len(survivor_pairs) else np.zeros((0, 2), np.int64)
    return MultiGraph(len(verts), edges, origin=verts)


def cola_full_graph(cell: PoissonCell, result: ColaResult, survivor_pairs) -> MultiGraph:
    """The whole cloning multigraph: COLA's matches plus the survivor pairing.

    A clone COLA left over after exhausting the line is a degree-1 special
    loop that peeling would remove anyway; it is omitted here.
    """
    owner = cell.owner
    mp = result.matched_pairs
    mp = mp[mp[:, 0] != mp[:, 1]]
    pairs = np.concatenate([mp, np.asarray(survivor_pairs).reshape(-1, 2)])
    return MultiGraph(cell.n, owner[pairs] if len(pairs) else np.zeros((0, 2), np.int64))


def full_cloning_graph(stream: RngStream, n: int, lam: float) -> MultiGraph:
    """G_PC(n, lam/n): Poisson(lam) clones per vertex, uniformly matched."""
    if n < 1 or not lam > 0:
        raise ValueError("need n >= 1 and lam > 0")
    counts = poisson_array(stream, lam, n)
    owner = np.repeat(np.arange(n, dtype=np.int64), counts)
    pairs = _pair_clones(stream, np.arange(len(owner)))
    return MultiGraph(n, owner[pairs] if len(pairs) else np.zeros((0, 2), np.int64))
