"""Acceptance gate. Each test appends one pass/fail line to the terminal summary."""
import time

import numpy as np
import pytest

import oracles
from conftest import ACCEPTANCE_LINES, random_tournament
from tournsim.cli import main
from tournsim.config import preset
from tournsim.core import enumerate_all_tournaments
from tournsim.majorization import (
    check_equalizing_moves,
    check_subset_sums,
    check_transitive_degrees,
    subset_sum_vector,
)
from tournsim.models import ModelSpec
from tournsim.montecarlo import ExperimentPlan, exact_probability, run_experiment
from tournsim.solutions import Solution, solve, top_cycle, uncovered_set

TRIALS = 10_000
SEED = 20190710


def record(number, ok, detail):
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def _run(model, n_values, solutions, trials=TRIALS, workers=1):
    plan = ExperimentPlan(ModelSpec.condorcet(model) if isinstance(model, str) else model,
                          tuple(n_values), tuple(solutions), trials, SEED)
    return run_experiment(plan, workers=workers)


def test_c1_exact_small_n():
    uniform = ModelSpec.condorcet("0.5")
    # Warm the compiled kernels so the timing reflects the run itself.
    _run(uniform, (3,), ("TC",), trials=10)
    start = time.perf_counter()
    exact = {s: exact_probability(uniform, s, 3) for s in ("TC", "UC", "COND")}
    res = _run(uniform, (3,), ("TC", "UC", "COND"), trials=100_000)
    elapsed = time.perf_counter() - start
    mc = {s: res.fraction(3, s) for s in ("TC", "UC", "COND")}
    ok = all(v == 0.25 for v in exact.values())
    ok &= all(abs(v - 0.25) <= 0.006 for v in mc.values())
    ok &= elapsed < 1.0
    detail = ", ".join(f"{s} exact={exact[s]} mc={mc[s]:.4f}" for s in exact)
    record(1, ok, f"{detail}; {elapsed:.2f}s (tol 0.006, <1s)")


def test_c2_uniform_figure():
    plan = preset("figure1a").plan
    start = time.perf_counter()
    res = run_experiment(plan)
    elapsed = time.perf_counter() - start
    targets = [(5, "COND", 0.691), (5, "TC", 0.535), (5, "UC", 0.058), (30, "UC", 0.884)]
    got = [(n, s, t, res.fraction(n, s)) for n, s, t in targets]
    ok = all(abs(v - t) <= 0.015 for *_, t, v in got) and elapsed < 60
    detail = ", ".join(f"{s}({n})={v:.4f}/{t}" for n, s, t, v in got)
    record(2, ok, f"{detail}; {elapsed:.1f}s (tol 0.015, <60s)")


def test_c3_one_over_n():
    res = _run("1/n", (100,), ("COND", "TC"))
    cond, tc = res.fraction(100, "COND"), res.fraction(100, "TC")
    ok = abs(cond - 0.625) <= 0.02 and abs(tc - 0.392) <= 0.02
    limits = f"limits {1 - np.exp(-1):.4f}, {(1 - np.exp(-1)) ** 2:.4f}"
    record(3, ok, f"COND(100)={cond:.4f}/0.625, TC(100)={tc:.4f}/0.392 (tol 0.02; {limits})")


@pytest.mark.slow
def test_c4_uc_discrimination():
    plan = preset("figure1f").plan
    start = time.perf_counter()
    res = run_experiment(plan)
    elapsed = time.perf_counter() - start
    uc = max(res.fraction(n, "UC") for n in plan.n_values)
    low = min(min(res.fraction(n, "COND"), res.fraction(n, "TC")) for n in plan.n_values)
    over = [f"UC({n})={res.fraction(n, 'UC'):.4f}" for n in plan.n_values if res.fraction(n, "UC") > 0.001]
    ok = uc <= 0.001 and low >= 0.999 and elapsed < 1800
    record(4, ok, f"n=50..1000: max UC={uc:.4f} (<=0.001), min COND/TC={low:.4f} (>=0.999); "
                  f"over bound: {', '.join(over) or 'none'}; {elapsed:.1f}s")


def test_c5_gap_model():
    checks = [
        ("0.3", 40, 0.911),
        ("0", 100, 0.495),
        ("0.6*sqrt(log(n)/n)", 50, 0.789),
    ]
    parts, ok = [], True
    for p, n, target in checks:
        v = _run(ModelSpec.gap(p), (n,), ("UC",)).fraction(n, "UC")
        ok &= abs(v - target) <= 0.02
        parts.append(f"UC(n={n},p={p})={v:.4f}/{target}")
    record(5, ok, ", ".join(parts) + " (tol 0.02)")


def test_c6_lemma_suites():
    reports = [
        check_transitive_degrees(5),
        check_equalizing_moves(4, 8),
        check_subset_sums(1000, seed=0),
    ]
    example = subset_sum_vector((2, 4, 5, 7), 2)
    ok = all(r.passed for r in reports) and example == (12, 11, 9, 9, 7, 6)
    lines = "; ".join(r.line() for r in reports)
    record(6, ok, f"{lines}; (2,4,5,7)^(2)={example}")


def _chain_holds(T):
    s = {sol: solve(sol, T) for sol in Solution}
    return (
        s[Solution.UCINF] <= s[Solution.UC] <= s[Solution.TC] <= s[Solution.CNL]
        and s[Solution.TC] <= s[Solution.COND]
    )


def test_c7_property_suite():
    exhaustive = 0
    ok = True
    for n in range(1, 6):
        for T in enumerate_all_tournaments(n):
            adj = oracles.adjacency(T)
            ok &= _chain_holds(T)
            ok &= set(top_cycle(T)) == oracles.tc_by_definition(adj)
            ok &= set(uncovered_set(T)) == oracles.uc_by_covering(adj)
            exhaustive += 1
    rng = np.random.default_rng(7)
    randoms = 0
    for n in (20, 100):
        for i in range(10_000):
            # Mix uniform and strongly ordered tournaments so every inclusion is exercised.
            p = (0.5, 0.9, 0.97)[i % 3]
            ok &= _chain_holds(random_tournament(rng, n, p))
            randoms += 1
    record(7, ok, f"chain and oracle agreement on {exhaustive} tournaments n<=5, chain on {randoms} random n in {{20,100}}")


def test_c8_determinism(tmp_path, capsys):
    cfg = tmp_path / "det.cfg"
    cfg.write_text(
        "model = condorcet\np = 1/n\nn = 5,10:100:10\ntrials = 2000\n"
        "solutions = COND,CNL,TC,UC,UCinf\nseed = 12345\n"
    )
    outs = []
    for i, workers in enumerate(("1", "1", "8")):
        path = tmp_path / f"run{i}.csv"
        assert main(["simulate", str(cfg), "--out", str(path), "--workers", workers]) == 0
        outs.append(path.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1] == outs[2]
    record(8, ok, f"three simulate runs (workers 1, 1, 8) byte-identical: {ok} ({len(outs[0])} bytes)")


def test_c9_voter_model():
    plan = preset("voters3-uc").plan
    res = run_experiment(ExperimentPlan(plan.model, (200,), (Solution.UC,), plan.trials, plan.root_seed))
    uc = res.fraction(200, "UC")
    k1 = ModelSpec.voters(1, "0.3")
    mc = _run(k1, (3,), tuple(Solution), trials=100_000)
    worst = 0.0
    for s in Solution:
        q = exact_probability(ModelSpec.condorcet("0.3"), s, 3)
        sigma = (q * (1 - q) / 100_000) ** 0.5
        worst = max(worst, abs(mc.fraction(3, s) - q) / sigma)
    ok = uc >= 0.99 and worst <= 4
    record(9, ok, f"voters k=3 n=200 UC={uc:.4f} (>=0.99); k=1 vs exact n=3 max |z|={worst:.2f} (<=4)")
