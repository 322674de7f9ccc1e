"""Release acceptance suite.

Every criterion prints one `ACCEPTANCE <id>: PASS/FAIL` line on the real
stdout (bypassing capture) so a plain pytest run doubles as the acceptance
report. Criteria tied to optional datasets skip loudly per network; fetch
the files with scripts/fetch_datasets.py to enable them.
"""

from __future__ import annotations

import csv
import json
import random
import sys
import time

import numpy as np
import pytest

from netquake.attack import StrategySpec, compute_R, materialize_step, run_strategy
from netquake.centrality import betweenness_approx, betweenness_exact, draw_pivots
from netquake.centrality import PivotSample
from netquake.cli import main
from netquake.graph import (
    Graph,
    RemovalState,
    components_summary,
    load_edge_list,
    load_gml,
    sq_curve_full,
    write_edge_list,
)
from netquake.netgen import generate_ba, generate_er
from netquake.qre import QreParams, qre_estimate

from .conftest import FIG2_EDGE_TEXT, dataset_path, node, random_edges
from . import oracles


_CAPSYS = None


@pytest.fixture(autouse=True)
def _live_reporting(capsys):
    # report() suspends capture so the PASS/FAIL lines reach the terminal
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def report(criterion: str, status: str, detail: str = "") -> None:
    line = f"\nACCEPTANCE {criterion}: {status}"
    if detail:
        line += f"  [{detail}]"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, file=sys.__stdout__, flush=True)


def check(criterion: str, ok: bool, detail: str = "") -> None:
    report(criterion, "PASS" if ok else "FAIL", detail)
    assert ok, f"{criterion}: {detail}"


def load_dataset(criterion: str, name: str):
    path = dataset_path(name)
    if not path.exists():
        report(criterion, "SKIP", f"{name}: {path.name} missing, see scripts/fetch_datasets.py")
        pytest.skip(f"dataset {name} not fetched")
    return load_gml(path)


_warmed = False


def warm_kernels() -> None:
    """Compile the jit kernels outside any timed section."""
    global _warmed
    if _warmed:
        return
    g = generate_ba(200, 2, seed=0)
    run_strategy(g, StrategySpec(metric="betw", mode="interactive"))
    qre_estimate(g, QreParams(x=10, y=3, z=1, seed=0))
    _warmed = True


# reference R values for the bundled datasets, tolerance 0.02
EXPECTED_IBET = {
    "dolphins": 0.18,
    "lesmis": 0.12,
    "polbooks": 0.20,
    "adjnoun": 0.23,
    "football": 0.32,
    "celegansneural": 0.25,
    "netscience": 0.04,
    "power": 0.04,
}


@pytest.mark.parametrize("name", sorted(EXPECTED_IBET))
def test_c1_interactive_betweenness_reference_values(name):
    graph = load_dataset("1", name)
    warm_kernels()
    start = time.perf_counter()
    curve = run_strategy(graph, StrategySpec(metric="betw", mode="interactive"))
    elapsed = time.perf_counter() - start
    expected = EXPECTED_IBET[name]
    ok = abs(curve.r - expected) <= 0.02 and elapsed < 60.0
    check("1", ok, f"{name}: ibet R={curve.r:.4f} expected {expected}+-0.02, {elapsed:.1f}s/60s")


@pytest.mark.parametrize("name", sorted(EXPECTED_IBET))
def test_c2_qre_competitive(name):
    graph = load_dataset("2", name)
    warm_kernels()
    ibet = run_strategy(graph, StrategySpec(metric="betw", mode="interactive")).r
    static_deg = run_strategy(graph, StrategySpec(metric="deg")).r
    est = qre_estimate(graph, QreParams(x=100, z=20, seed=0))
    ok = est.best_r <= ibet + 0.03 and est.best_r <= static_deg
    check(
        "2",
        ok,
        f"{name}: qre R={est.best_r:.4f} vs ibet {ibet:.4f}+0.03 and deg {static_deg:.4f}",
    )


@pytest.mark.parametrize("name,stable_after", [("polbooks", 15), ("dolphins", 5), ("lesmis", 5)])
def test_c3_iteration_convergence(name, stable_after):
    graph = load_dataset("3", name)
    est = qre_estimate(graph, QreParams(x=100, z=20, seed=0))
    history = np.asarray(est.history)
    deltas = np.diff(history)
    monotone = bool(np.all(deltas <= 1e-12))
    late = np.abs(deltas[stable_after:])
    stable = bool(np.all(late < 0.005))
    check(
        "3",
        monotone and stable,
        f"{name}: monotone={monotone}, max |dR| after iter {stable_after} = {late.max():.5f}",
    )


def test_c4_random_network_correlation():
    warm_kernels()
    start = time.perf_counter()
    qre_r, ibet_r = [], []
    for i in range(30):
        for graph in (generate_ba(300, 2, seed=1000 + i),
                      generate_er(300, 4 / 299, seed=2000 + i)):
            ibet_r.append(run_strategy(graph, StrategySpec(metric="betw", mode="interactive")).r)
            qre_r.append(qre_estimate(graph, QreParams(x=100, z=20, seed=3000 + i)).best_r)
    pearson = float(np.corrcoef(qre_r, ibet_r)[0, 1])
    elapsed = time.perf_counter() - start
    ok = pearson >= 0.85 and elapsed < 1800.0
    check("4", ok, f"pearson={pearson:.4f} over 60 networks, {elapsed:.0f}s/1800s")


def test_c5_subquadratic_scaling():
    # interactive betweenness is deliberately NOT run at these sizes
    warm_kernels()
    times = []
    for k, n in enumerate((20_000, 40_000, 80_000)):
        graph = generate_ba(n, 2, seed=50 + k)
        start = time.perf_counter()
        qre_estimate(graph, QreParams(seed=1))
        times.append(time.perf_counter() - start)
    ratios = [times[1] / times[0], times[2] / times[1]]
    ok = all(r < 3.0 for r in ratios)
    check(
        "5",
        ok,
        "qre seconds 20k/40k/80k = "
        + "/".join(f"{t:.1f}" for t in times)
        + f", ratios {ratios[0]:.2f}, {ratios[1]:.2f} < 3.0",
    )


def test_c6a_betweenness_against_path_enumeration():
    rnd = random.Random(101)
    worst = 0.0
    for _ in range(500):
        n = rnd.randint(2, 12)
        edges = random_edges(rnd, n, rnd.choice([0.15, 0.3, 0.5]))
        g = Graph.from_edges(n, edges)
        state = RemovalState(n)
        removed = set(rnd.sample(range(n), rnd.randint(0, n - 1)))
        state.remove_many(removed)
        scores = betweenness_exact(g, state)
        expected = oracles.brute_betweenness(oracles.adj_from_edges(n, edges), removed)
        for v in range(n):
            if v not in removed:
                worst = max(worst, abs(scores[v] - expected[v]))
    check("6a", worst <= 1e-9, f"500 graphs N<=12, worst |diff|={worst:.2e}")


def test_c6b_curve_against_forward_recomputation():
    rnd = random.Random(103)
    exact = True
    for _ in range(200):
        n = rnd.randint(2, 64)
        edges = random_edges(rnd, n, rnd.choice([0.04, 0.1, 0.3]))
        g = Graph.from_edges(n, edges)
        attack = list(range(n))
        rnd.shuffle(attack)
        got = sq_curve_full(g, attack)
        want = oracles.forward_sq_curve(oracles.adj_from_edges(n, edges), attack)
        exact = exact and np.array_equal(got, want)
    check("6b", exact, "200 (graph, attack) pairs N<=64, bitwise equal")


def test_c6c_full_pivot_sample_is_exact():
    rnd = random.Random(107)
    worst = 0.0
    for _ in range(100):
        n = rnd.randint(2, 20)
        g = Graph.from_edges(n, random_edges(rnd, n, 0.25))
        state = RemovalState(n)
        state.remove_many(rnd.sample(range(n), rnd.randint(0, n - 2)))
        sample = draw_pivots(g, state, state.residual_count, seed=rnd.randrange(2**32))
        approx = betweenness_approx(g, state, sample)
        exact = betweenness_exact(g, state)
        residual = ~state.mask
        worst = max(worst, float(np.abs(approx[residual] - exact[residual]).max()))
    check("6c", worst <= 1e-9, f"100 full-pivot samples, worst |diff|={worst:.2e}")


def test_c6d_single_pivot_average_is_exact():
    rnd = random.Random(109)
    worst = 0.0
    for _ in range(100):
        n = rnd.randint(2, 10)
        g = Graph.from_edges(n, random_edges(rnd, n, 0.3))
        state = RemovalState(n)
        state.remove_many(rnd.sample(range(n), rnd.randint(0, n - 1)))
        residual = np.flatnonzero(~state.mask)
        total = np.zeros(n)
        for pivot in residual:
            sample = PivotSample(pivots=np.array([pivot], dtype=np.int64), seed=0)
            total += np.nan_to_num(betweenness_approx(g, state, sample), neginf=0.0)
        mean = total / residual.size
        exact = np.nan_to_num(betweenness_exact(g, state), neginf=0.0)
        worst = max(worst, float(np.abs(mean - exact).max()))
    check("6d", worst <= 1e-9, f"100 graphs N<=10, worst |mean - exact|={worst:.2e}")


def test_c7a_qre_monotone_over_random_pairs():
    rnd = random.Random(113)
    ok = True
    below_half = True
    for _ in range(100):
        n = rnd.randint(10, 60)
        if rnd.random() < 0.5:
            g = generate_ba(n, 2, seed=rnd.randrange(2**32))
        else:
            g = Graph.from_edges(n, random_edges(rnd, n, 0.1))
        est = qre_estimate(g, QreParams(x=10, y=4, z=5, seed=rnd.randrange(2**32)))
        deltas = np.diff(est.history)
        ok = ok and bool(np.all(deltas <= 1e-12))
        below_half = below_half and est.best_r < 0.5
    check("7a", ok and below_half, "100 (graph, seed) pairs: history monotone, R<0.5")


def test_c7b_sampled_r_never_below_dense():
    rnd = random.Random(127)
    ok = True
    for _ in range(100):
        n = rnd.randint(3, 50)
        g = Graph.from_edges(n, random_edges(rnd, n, 0.12))
        order = list(range(n))
        rnd.shuffle(order)
        dense = sq_curve_full(g, order)
        positions = np.unique(rnd.sample(range(1, n + 1), rnd.randint(1, n)))
        sampled = materialize_step(positions, dense[positions], n, dense[0])
        ok = ok and compute_R(sampled, n) >= compute_R(dense, n) - 1e-12
    check("7b", ok, "100 random attacks: sampled-position R >= dense R")


def test_c7c_full_determinism(tmp_path, capsys):
    g = generate_ba(150, 2, seed=9)
    params = QreParams(x=40, y=5, z=6, seed=21)
    a, b = qre_estimate(g, params), qre_estimate(g, params)
    same_runs = np.array_equal(a.best_materialized, b.best_materialized) and a.history == b.history

    # thread count must not leak into any R cell of a bench matrix
    net = tmp_path / "net.txt"
    write_edge_list(g, net)
    argv = ["bench", "--input", str(net), "--strategies", "deg,ideg,qre", "--seed", "4"]
    rows = []
    for threads in ("1", "4"):
        assert main(argv + ["--threads", threads]) == 0
        rows.append(list(csv.DictReader(capsys.readouterr().out.splitlines())))
    r_cols = [{k: v for k, v in row.items() if k.endswith("_R")} for row in rows[0]]
    r_cols_threaded = [{k: v for k, v in row.items() if k.endswith("_R")} for row in rows[1]]
    check(
        "7c",
        same_runs and r_cols == r_cols_threaded,
        "repeat runs bitwise-identical; bench R columns equal at --threads 1 and 4",
    )


@pytest.fixture
def fixture9():
    import io

    return load_edge_list(io.StringIO(FIG2_EDGE_TEXT))


@pytest.mark.xfail(
    reason="documented argmax is e, but the fixture is a tree whose exact "
    "betweenness puts f first (f=17, e=16); companion test pins the real values",
    strict=True,
)
def test_c8a_documented_argmax(fixture9):
    g = fixture9
    scores = betweenness_exact(g)
    top = int(np.argmax(scores))
    report(
        "8a",
        "XFAIL (documented defect)",
        f"stated argmax e never holds: exact scores rank {g.labels[top]!r} first",
    )
    assert g.labels[top] == "e"


def test_c8b_fixture_ground_truth(fixture9):
    g = fixture9
    scores = betweenness_exact(g)
    want = {"a": 0, "b": 0, "c": 13, "d": 15, "e": 16, "f": 17, "g": 7, "h": 0, "i": 0}
    values_ok = all(scores[node(g, lab)] == float(v) for lab, v in want.items())
    argmax_f = g.labels[int(np.argmax(scores))] == "f"

    state = RemovalState(g.n)
    state.remove(node(g, "e"))
    gc_after_e = components_summary(g, state).gc_size

    state = RemovalState(g.n)
    state.remove_many([node(g, "c"), node(g, "f")])
    gc_after_cf = components_summary(g, state).gc_size

    ok = values_ok and argmax_f and gc_after_e == 4 and gc_after_cf == 2
    check(
        "8b",
        ok,
        f"exact argmax f (17 vs e 16); GC after {{e}}={gc_after_e}/4, after {{c,f}}={gc_after_cf}/2",
    )


def test_c8c_qre_finds_two_node_break(fixture9):
    g = fixture9
    hits = 0
    for seed in range(100):
        est = qre_estimate(g, QreParams(x=9, y=4, z=20, seed=seed))
        if est.best_materialized[2] <= 2 / 9 + 1e-12:
            hits += 1
    check("8c", hits >= 90, f"curve(Q=2) <= 2/9 on {hits}/100 seeds (Z<=20, Y=4)")
