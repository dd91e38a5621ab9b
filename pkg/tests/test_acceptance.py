"""Exit criteria, one test per criterion, each reporting a PASS/FAIL line."""
import math
import time
import tracemalloc
from pathlib import Path

import numpy as np

from giant_anatomy import stats
from giant_anatomy.cli import run
from giant_anatomy.contiguous import sample_giant, sample_poisson_geometric
from giant_anatomy.direct import extract_anatomy, sample_gnp
from giant_anatomy.dists import RngStream
from giant_anatomy.graph import configuration_pairing, contract_kernel, two_core
from giant_anatomy.scalar_math import ModelParams, borel_pmf, conjugate, geom_pmf, moments

from conftest import random_multigraph
from test_direct import _same_anatomy
from test_graph import _edge_length_multiset, exact_class_law, peel_random_order
from test_stats import brute_force_ks

GRID = [1.1, 1.5, 2.0, 3.0, 5.0, 10.0]
P2 = ModelParams(100_000, 2.0)


def test_c01_conjugate(report_line):
    worst_eq = worst_id = 0.0
    slowest = 0.0
    for lam in GRID:
        t0 = time.perf_counter()
        mu = conjugate(lam)
        slowest = max(slowest, time.perf_counter() - t0)
        worst_eq = max(worst_eq, abs(mu * math.exp(-mu) - lam * math.exp(-lam)))
        worst_id = max(worst_id, abs(math.exp(-(lam - mu)) - mu / lam))
    ok = worst_eq <= 1e-12 and worst_id <= 1e-10 and slowest < 1e-3
    report_line("C1 conjugate", ok, f"eq={worst_eq:.1e} id={worst_id:.1e} t={slowest * 1e3:.3f}ms")
    assert ok


def test_c02_moment_consistency(report_line):
    n = 100_000
    worst = max(abs(m.core_edges - m.core_vertices - m.b3 * n)
                for m in (moments(ModelParams(n, lam)) for lam in GRID))
    ok = worst <= 1e-6 * n
    report_line("C2 moment consistency", ok, f"max |diff| = {worst:.2e} (tol {1e-6 * n:g})")
    assert ok


def test_c03_borel_geometric_laws(report_line):
    t0 = time.perf_counter()
    sizes, lengths = [], []
    i = 0
    while sum(map(len, sizes)) < 10**6:
        _, a = sample_giant(RngStream(303, i), P2)
        sizes.append(a.tree_sizes)
        lengths.append(a.path_lengths)
        i += 1
    sizes, lengths = np.concatenate(sizes), np.concatenate(lengths)
    t = np.arange(1, 21)
    d_tree = np.max(np.abs(np.bincount(sizes, minlength=21)[1:21] / len(sizes) - borel_pmf(P2.mu, t)))
    d_path = np.max(np.abs(np.bincount(lengths, minlength=21)[1:21] / len(lengths) - geom_pmf(P2.mu, t)))
    elapsed = time.perf_counter() - t0
    ok = d_tree <= 0.003 and d_path <= 0.003 and elapsed < 30
    report_line("C3 Borel/geometric laws", ok,
                f"trees={len(sizes)} maxdev={d_tree:.2e}; paths={len(lengths)} maxdev={d_path:.2e}; {elapsed:.1f}s")
    assert ok


def test_c04_mean_anatomy(report_line, contiguous_dataset):
    report = stats.theory_check(contiguous_dataset, P2)
    rows = {r["metric"]: r for r in report["metrics"]}
    wanted = ["core_size", "tree_vertices", "core_excess", "kernel_size", "kernel_edges"]
    zs = {m: rows[m]["z"] for m in wanted}
    ok = all(abs(z) <= 4 for z in zs.values())
    report_line("C4 mean anatomy vs theory", ok,
                " ".join(f"{m}:z={z:+.2f}" for m, z in zs.items()))
    assert ok


def test_c05_cross_pipeline(report_line, contiguous_simple_dataset, direct_dataset):
    # same streams as `giant-anatomy compare --n 100000 --lambda 2 --reps 200 --seed 1`
    rep = stats.compare(contiguous_simple_dataset, direct_dataset, significance=0.001)
    wrong_lambda = stats.monte_carlo(stats.SamplerSpec("direct", 100_000, 2.5), 50, 77)
    neg = stats.compare(contiguous_simple_dataset, wrong_lambda, significance=0.001)
    neg_core = neg["metrics"][0]
    ok = rep["verdict"] == "pass" and neg_core["verdict"] == "fail"
    detail = " ".join(f"{r['metric']}:D={r['ks']:.3f},p={r['p']:.4f}" for r in rep["metrics"])
    report_line("C5 contiguous vs direct", ok,
                f"{detail}; negative control core_size p={neg_core['p']:.1e}")
    assert ok


def test_c06_tau_concentration(report_line):
    params = ModelParams(10_000, 2.0)
    taus = stats.cola_taus(10_000, 2.0, 200, base_seed=600)
    rep = stats.tau_concentration(taus, params)
    small = stats.cola_taus(1_000, 2.0, 200, base_seed=601)
    ratio = small.std(ddof=1) / taus.std(ddof=1)
    bias = abs(taus.mean() - params.lambda0)
    ok = bias <= 0.02 and rep["exceedance_at_4"] <= 0.05 and 2.5 <= ratio <= 4.0
    report_line("C6 tau concentration", ok,
                f"|mean-L0|={bias:.4f} exceed(4)={rep['exceedance_at_4']:.3f} std ratio={ratio:.2f}")
    assert ok


def test_c07_longest_two_path(report_line, contiguous_dataset):
    med = float(np.median(stats.column(contiguous_dataset, "longest_two_path")))
    target = math.log(P2.n) / -math.log(P2.mu)
    ok = abs(med - target) <= 5
    report_line("C7 longest degree-2 path", ok, f"median={med} target={target:.2f} window=5")
    assert ok


def test_c08_brute_force_oracles(report_line, contiguous_dataset, direct_dataset):
    law, _ = exact_class_law([3, 3])
    p_exact = law[((0, 1), (0, 1), (0, 1))]
    s = RngStream(801)
    draws = 10**5
    hits = 0
    for _ in range(draws):
        e = configuration_pairing(s, [3, 3]).edges
        hits += bool(np.all(e[:, 0] != e[:, 1]))
    pairing_ok = abs(hits / draws - p_exact) <= 0.01

    ks_ok = all(
        stats.ks_statistic(stats.column(contiguous_dataset, m), stats.column(direct_dataset, m))
        == brute_force_ks(stats.column(contiguous_dataset, m).tolist(),
                          stats.column(direct_dataset, m).tolist())
        for m in ("core_size", "kernel_edges", "longest_two_path"))

    rng = np.random.default_rng(802)
    core_ok = True
    for i in range(1000):
        n = int(rng.integers(1, 60))
        g = random_multigraph(rng, n, int(rng.integers(0, 2 * n + 1)), loops=bool(i % 2))
        core_ok &= np.array_equal(two_core(g)[1], peel_random_order(g, rng))
    ok = pairing_ok and ks_ok and core_ok
    report_line("C8 brute-force oracles", ok,
                f"triple-edge freq={hits / draws:.4f} (exact {p_exact}); ks exact={ks_ok}; 2-core={core_ok}")
    assert ok


def test_c09_round_trips(report_line, tmp_path):
    params = ModelParams(5000, 2.0)
    kernel_ok = True
    for i in range(100):
        core, kernel, lengths = sample_poisson_geometric(RngStream(901, i), params)
        k2, l2, cycles = contract_kernel(core)
        kernel_ok &= cycles == [] and _edge_length_multiset(k2, l2) == _edge_length_multiset(kernel, lengths)
    anatomy_ok = True
    for i in range(100):
        graph, own = sample_giant(RngStream(902, i), params)
        anatomy_ok &= _same_anatomy(extract_anatomy(graph), own)
    golden = Path(__file__).parent / "golden" / "contiguous_n1000_l2_s7.txt"
    out = tmp_path / "g.txt"
    run(["sample", "--model", "contiguous", "--n", "1000", "--lambda", "2", "--seed", "7",
         "--output", str(out)])
    cli_ok = out.read_bytes() == golden.read_bytes()
    ok = kernel_ok and anatomy_ok and cli_ok
    report_line("C9 round trips", ok, f"kernel={kernel_ok} anatomy={anatomy_ok} cli golden={cli_ok}")
    assert ok


def _best_time(fn, reps=3):
    best = math.inf
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def test_c10_performance(report_line):
    n = 10**6
    params = ModelParams(n, 2.0)
    tracemalloc.start()
    t0 = time.perf_counter()
    sample_giant(RngStream(1001), params)
    first = time.perf_counter() - t0
    _, peak = tracemalloc.get_traced_memory()
    tracemalloc.stop()
    contiguous = _best_time(lambda: sample_giant(RngStream(1002), params))
    direct = _best_time(lambda: extract_anatomy(sample_gnp(RngStream(1003), n, 2.0 / n)))
    speedup = direct / contiguous
    ok = first <= 5.0 and peak <= 2 * 1024**3 and speedup >= 3.0
    report_line("C10 performance", ok,
                f"contiguous {first:.2f}s (best {contiguous:.2f}s), peak {peak / 2**20:.0f} MiB, "
                f"direct {direct:.2f}s, speedup {speedup:.1f}x")
    assert ok
