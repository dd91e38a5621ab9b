"""Metric extraction, Monte-Carlo replication and distribution checks.

Bands are always built from empirical standard errors. No closed-form
variances exist for the anatomy counts, only their means.
"""
from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Sequence

import numpy as np
from scipy.special import kolmogorov

from .cloning import cola, full_cloning_graph, sample_cell
from .contiguous import sample_giant, sample_poisson_configuration, sample_poisson_geometric
from .direct import extract_anatomy, sample_gnp
from .dists import RngStream
from .graph import Anatomy, MultiGraph, contract_kernel
from .scalar_math import ModelParams, longest_path_prediction, moments

SCHEMA_VERSION = 1
MODELS = ("contiguous", "direct", "cloning", "poisson-config", "poisson-geometric")
THEOREM_METRICS = ("core_size", "tree_vertices", "core_excess")
THEORY_METRICS = THEOREM_METRICS + ("kernel_size", "kernel_edges", "core_edges")
LONGEST_PATH_WINDOW = 5.0


@dataclass(frozen=True)
class AnatomySummary:
    giant_size: int
    core_size: int
    core_edges: int
    kernel_size: int
    kernel_edges: int
    n2: int
    longest_two_path: int
    max_tree_size: int
    disjoint_cycle_vertices: int


def summarize(anatomy: Anatomy) -> AnatomySummary:
    core_deg = anatomy.core.degrees()
    lengths = np.asarray(anatomy.path_lengths)
    trees = np.asarray(anatomy.tree_sizes)
    return AnatomySummary(
        giant_size=anatomy.giant.vertex_count,
        core_size=anatomy.core.vertex_count,
        core_edges=anatomy.core.edge_count,
        kernel_size=anatomy.kernel.vertex_count,
        kernel_edges=anatomy.kernel.edge_count,
        n2=int(np.count_nonzero(core_deg == 2)),
        longest_two_path=int(lengths.max()) if lengths.size else 0,
        max_tree_size=int(trees.max()) if trees.size else 0,
        disjoint_cycle_vertices=int(sum(anatomy.disjoint_cycles)),
    )


def column(dataset: Sequence[AnatomySummary], metric: str) -> np.ndarray:
    """Values of a summary field, or of one of the derived metrics
    ``tree_vertices`` (giant minus core) and ``core_excess`` (edges minus
    vertices of the core)."""
    if metric == "tree_vertices":
        return np.array([r.giant_size - r.core_size for r in dataset], dtype=float)
    if metric == "core_excess":
        return np.array([r.core_edges - r.core_size for r in dataset], dtype=float)
    return np.array([getattr(r, metric) for r in dataset], dtype=float)


# -- sampling ---------------------------------------------------------------

@dataclass(frozen=True)
class SamplerSpec:
    model: str
    n: int
    lam: float
    simple: bool = False
    parity: str = "reject"

    def __post_init__(self):
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; choose from {MODELS}")
        if self.model == "cloning" and self.simple:
            raise ValueError("cloning output is a multigraph; simple=True is not supported")

    @property
    def params(self) -> ModelParams:
        return ModelParams(self.n, self.lam)


def _core_only_anatomy(core: MultiGraph) -> Anatomy:
    kernel, lengths, cycles = contract_kernel(core)
    return Anatomy(core, core, kernel, lengths, cycles,
                   np.ones(core.vertex_count, dtype=np.int64))


def sample_anatomy(spec: SamplerSpec, stream: RngStream) -> Anatomy:
    params = spec.params
    if spec.model == "contiguous":
        return sample_giant(stream, params, simple=spec.simple, parity=spec.parity)[1]
    if spec.model == "direct":
        return extract_anatomy(sample_gnp(stream, spec.n, spec.lam / spec.n))
    if spec.model == "cloning":
        return extract_anatomy(full_cloning_graph(stream, spec.n, spec.lam))
    if spec.model == "poisson-config":
        g = sample_poisson_configuration(stream, params, parity=spec.parity)
        return _core_only_anatomy(g)
    core, _, _ = sample_poisson_geometric(stream, params, parity=spec.parity)
    return _core_only_anatomy(core)


def replicate_stream(base_seed: int, index: int) -> RngStream:
    return RngStream(base_seed, base_seed + index)


def _one(args):
    spec, base_seed, i = args
    try:
        return summarize(sample_anatomy(spec, replicate_stream(base_seed, i)))
    except Exception as exc:
        raise RuntimeError(f"replicate {i} failed: {exc}") from exc


def worker_count() -> int:
    env = os.environ.get("GIANT_ANATOMY_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def monte_carlo(spec: SamplerSpec, reps: int, base_seed: int, workers: int | None = None):
    """Run ``reps`` replicates; replicate ``i`` uses stream id ``base_seed + i``.

    The result is in replicate order and does not depend on ``workers``.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    workers = worker_count() if workers is None else workers
    jobs = [(spec, base_seed, i) for i in range(reps)]
    if workers <= 1 or reps == 1:
        return [_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_one, jobs, chunksize=max(1, reps // (4 * workers))))


def cola_taus(n: int, lam: float, reps: int, base_seed: int) -> np.ndarray:
    return np.array([cola(sample_cell(replicate_stream(base_seed, i), n, lam)).tau
                     for i in range(reps)])


# -- analysis ---------------------------------------------------------------

def _row(metric, mean_a, mean_b, std_a, std_b, z, ks, p, verdict):
    return {"metric": metric, "mean_a": mean_a, "mean_b": mean_b, "std_a": std_a,
            "std_b": std_b, "z": z, "ks": ks, "p": p, "verdict": verdict}


def theory_predictions(params: ModelParams) -> dict:
    m = moments(params)
    n = params.n
    return {
        "core_size": m.b1 * n,
        "tree_vertices": m.b2 * n,
        "core_excess": m.b3 * n,
        "kernel_size": m.kernel_vertices,
        "kernel_edges": m.kernel_edges,
        "core_edges": m.core_edges,
    }


def theory_check(dataset, params: ModelParams, z_max: float = 4.0,
                 window: float = LONGEST_PATH_WINDOW) -> dict:
    """z-scores of sample means against the closed-form predictions.

    Also checks that the median longest chain lies within ``window`` of
    ``log_{1/mu} n``; that window is an engineering choice, not a derived
    constant.
    """
    if not len(dataset):
        raise ValueError("empty dataset")
    pred = theory_predictions(params)
    rows = []
    for metric in THEORY_METRICS:
        x = column(dataset, metric)
        mean, sd = float(x.mean()), float(x.std(ddof=1)) if len(x) > 1 else 0.0
        se = sd / math.sqrt(len(x))
        diff = mean - pred[metric]
        z = diff / se if se > 0 else (0.0 if diff == 0 else math.copysign(math.inf, diff))
        rows.append(_row(metric, mean, pred[metric], sd, None, z, None, None,
                         "pass" if abs(z) <= z_max else "fail"))
    lp = column(dataset, "longest_two_path")
    target = longest_path_prediction(params)
    med = float(np.median(lp))
    rows.append(_row("longest_two_path_median", med, target, float(lp.std()), None,
                     None, None, None, "pass" if abs(med - target) <= window else "fail"))
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "theory_check",
        "n": params.n,
        "lambda": params.lam,
        "reps": len(dataset),
        "z_max": z_max,
        "longest_path_window": window,
        "note": "longest_two_path window is an engineering choice",
        "metrics": rows,
        "verdict": "pass" if all(r["verdict"] == "pass" for r in rows) else "fail",
    }


def ks_statistic(a, b) -> float:
    """Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|."""
    a = np.sort(np.asarray(a, dtype=float))
    b = np.sort(np.asarray(b, dtype=float))
    grid = np.concatenate([a, b])
    fa = np.searchsorted(a, grid, side="right") / len(a)
    fb = np.searchsorted(b, grid, side="right") / len(b)
    return float(np.max(np.abs(fa - fb)))


def ks_2samp(a, b):
    """KS statistic and its asymptotic p-value (Stephens' small-sample fix)."""
    d = ks_statistic(a, b)
    en = math.sqrt(len(a) * len(b) / (len(a) + len(b)))
    p = float(kolmogorov((en + 0.12 + 0.11 / en) * d))
    return d, min(1.0, max(0.0, p))


def welch_z(a, b) -> float:
    a, b = np.asarray(a, float), np.asarray(b, float)
    se = math.sqrt(a.var(ddof=1) / len(a) + b.var(ddof=1) / len(b))
    diff = a.mean() - b.mean()
    if se == 0:
        return 0.0 if diff == 0 else math.copysign(math.inf, diff)
    return float(diff / se)


def compare(dataset_a, dataset_b, significance: float = 0.001,
            metrics: Iterable[str] = THEOREM_METRICS) -> dict:
    """Per-metric KS and Welch tests; Bonferroni over the metrics."""
    metrics = list(metrics)
    if len(dataset_a) < 50 or len(dataset_b) < 50:
        raise ValueError("compare needs at least 50 rows per dataset")
    level = significance / len(metrics)
    rows = []
    for metric in metrics:
        xa, xb = column(dataset_a, metric), column(dataset_b, metric)
        d, p = ks_2samp(xa, xb)
        rows.append(_row(metric, float(xa.mean()), float(xb.mean()), float(xa.std(ddof=1)),
                         float(xb.std(ddof=1)), welch_z(xa, xb), d, p,
                         "pass" if p > level else "fail"))
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "compare",
        "significance": significance,
        "per_metric_level": level,
        "metrics": rows,
        "verdict": "pass" if all(r["verdict"] == "pass" for r in rows) else "fail",
    }


def tau_concentration(taus, params: ModelParams, gamma_grid=(0, 0.5, 1, 2, 3, 4, 5)) -> dict:
    """Frequencies of ``|tau - (lam - mu)| >= gamma / sqrt(n)`` along a grid."""
    taus = np.asarray(taus, dtype=float)
    if len(taus) < 100:
        raise ValueError("tau_concentration needs at least 100 values")
    dev = np.abs(taus - params.lambda0) * math.sqrt(params.n)
    grid = sorted(float(g) for g in gamma_grid)
    freq = [float(np.mean(dev >= g)) for g in grid]
    at4 = float(np.mean(dev >= 4.0))
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "tau_concentration",
        "n": params.n,
        "lambda": params.lam,
        "mean_tau": float(taus.mean()),
        "std_tau": float(taus.std(ddof=1)),
        "target": params.lambda0,
        "gamma": grid,
        "exceedance": freq,
        "monotone": all(x >= y for x, y in zip(freq, freq[1:])),
        "exceedance_at_4": at4,
        "verdict": "pass" if at4 <= 0.05 else "fail",
    }


# -- persistence ------------------------------------------------------------

CSV_HEADER = [f.name for f in fields(AnatomySummary)]


def write_csv(dataset, fh) -> None:
    w = csv.DictWriter(fh, fieldnames=CSV_HEADER, lineterminator="\n")
    w.writeheader()
    for row in dataset:
        w.writerow(asdict(row))


def read_csv(fh) -> list:
    r = csv.DictReader(fh)
    if r.fieldnames != CSV_HEADER:
        raise ValueError(f"unexpected CSV header {r.fieldnames}")
    return [AnatomySummary(**{k: int(v) for k, v in row.items()}) for row in r]
