import math

import pytest

import oracles
from tournsim.errors import CapExceededError, PlanError, RangeError
from tournsim.models import ModelSpec, condorcet_matrix, gap_matrix
from tournsim.montecarlo import (
    CSV_HEADER,
    ExperimentPlan,
    analytic_limit_check,
    exact_probability,
    render_csv,
    run_experiment,
    tournament_weights,
)
from tournsim.solutions import Solution

PREDICATES = {
    Solution.COND: lambda adj: len(oracles.cond_by_definition(adj)) == len(adj),
    Solution.CNL: lambda adj: len(oracles.cnl_by_definition(adj)) == len(adj),
    Solution.TC: lambda adj: len(oracles.tc_by_definition(adj)) == len(adj),
    Solution.UC: lambda adj: len(oracles.uc_by_covering(adj)) == len(adj),
    Solution.UCINF: lambda adj: len(oracles.ucinf_by_definition(adj)) == len(adj),
}


def test_exact_uniform_n3():
    uniform = ModelSpec.condorcet("0.5")
    for s in Solution:
        assert exact_probability(uniform, s, 3) == 0.25


def test_exact_singleton():
    for s in Solution:
        assert exact_probability(condorcet_matrix(1, 0.3), s) == 1.0


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("p", [0.5, 0.3, 0.1])
def test_exact_against_brute_force(n, p):
    for matrix in (condorcet_matrix(n, p), gap_matrix(n, p)):
        pmat = matrix.p.tolist()
        for s, pred in PREDICATES.items():
            expected = oracles.exact_by_brute_force(pmat, pred)
            assert exact_probability(matrix, s) == pytest.approx(expected, abs=1e-13)


def test_exact_condorcet_n3_p03():
    # Pr[no Condorcet winner]: the two 3-cycles, with weights p^2(1-p) + p(1-p)^2.
    p = 0.3
    expected = p * p * (1 - p) + p * (1 - p) * (1 - p)
    assert exact_probability(condorcet_matrix(3, p), "COND") == pytest.approx(expected, abs=1e-15)


def test_weights_sum_to_one():
    for n in range(1, 7):
        assert math.fsum(tournament_weights(gap_matrix(max(n, 2), 0.2)).tolist()) == pytest.approx(1.0, abs=1e-12)


def test_exact_cap():
    with pytest.raises(CapExceededError):
        exact_probability(ModelSpec.condorcet("0.5"), "TC", 7)


def test_plan_validation():
    model = ModelSpec.condorcet("0.5")
    with pytest.raises(PlanError):
        ExperimentPlan(model, (), ("TC",), 10)
    with pytest.raises(PlanError):
        ExperimentPlan(model, (10, 5), ("TC",), 10)
    with pytest.raises(PlanError):
        ExperimentPlan(model, (5,), (), 10)
    with pytest.raises(PlanError):
        ExperimentPlan(model, (5,), ("TC",), 0)


def test_plan_error_names_cell():
    plan = ExperimentPlan(ModelSpec.gap("0.3"), (1, 5), ("TC",), 10)
    with pytest.raises(PlanError) as info:
        run_experiment(plan)
    assert info.value.cell == ("gap:p=0.3", 1)


def test_p_zero_cond_always_excludes():
    plan = ExperimentPlan(ModelSpec.condorcet("0"), (10,), ("COND", "TC", "UC"), 50)
    res = run_experiment(plan)
    # p = 0 gives the transitive tournament, whose Condorcet winner is chosen alone.
    assert res.fraction(10, "COND") == 0.0
    assert res.fraction(10, "TC") == 0.0


def test_single_trial_fractions_are_binary():
    plan = ExperimentPlan(ModelSpec.condorcet("0.5"), (5, 10, 20), tuple(Solution), 1)
    for c in run_experiment(plan).cells:
        assert c.fraction in (0.0, 1.0)


def test_counts_follow_inclusion_chain():
    for model in (ModelSpec.condorcet("0.5"), ModelSpec.gap("0.1"), ModelSpec.voters(3, "0.3")):
        res = run_experiment(ExperimentPlan(model, (5, 10, 30, 60), tuple(Solution), 500, 9))
        for n in (5, 10, 30, 60):
            count = {s: res.cell(n, s).selects_all for s in Solution}
            assert count[Solution.UCINF] == count[Solution.UC] <= count[Solution.TC]
            assert count[Solution.TC] <= count[Solution.COND]
            assert count[Solution.TC] <= count[Solution.CNL]
            for s in Solution:
                c = res.cell(n, s)
                assert c.fraction * c.trials == c.selects_all


def test_cell_matches_per_trial_solutions():
    # Recount one cell trial by trial through the public sampler and solvers.
    from tournsim.models import sample
    from tournsim.rng import Seed, cell_root
    from tournsim.solutions import selects_all

    model = ModelSpec.condorcet("0.4")
    res = run_experiment(ExperimentPlan(model, (7,), tuple(Solution), 300, 5))
    root = cell_root(5, str(model), 7)
    for s in Solution:
        direct = sum(selects_all(s, sample(model, 7, Seed(root, t))) for t in range(300))
        assert res.cell(7, s).selects_all == direct


def test_solution_subset_does_not_change_samples():
    model = ModelSpec.condorcet("0.5")
    a = run_experiment(ExperimentPlan(model, (8,), ("COND",), 400, 3))
    b = run_experiment(ExperimentPlan(model, (8,), ("COND", "TC", "UC"), 400, 3))
    assert a.cell(8, "COND") == b.cell(8, "COND")


def test_adding_n_values_is_non_perturbing():
    model = ModelSpec.condorcet("0.3")
    a = run_experiment(ExperimentPlan(model, (10,), ("UC",), 300, 1))
    b = run_experiment(ExperimentPlan(model, (5, 10, 20), ("UC",), 300, 1))
    assert a.cell(10, "UC") == b.cell(10, "UC")


def test_workers_do_not_change_results():
    plan = ExperimentPlan(ModelSpec.condorcet("0.3"), (10, 20), tuple(Solution), 997, 77)
    assert run_experiment(plan, workers=1).cells == run_experiment(plan, workers=3).cells


@pytest.mark.parametrize(
    "model, n",
    [
        (ModelSpec.condorcet("0.5"), 4),
        (ModelSpec.condorcet("0.3"), 5),
        (ModelSpec.gap("0.1"), 5),
        (ModelSpec.voters(3, "0.3"), 4),
        (ModelSpec.voters(1, "0.2"), 3),
    ],
)
def test_monte_carlo_agrees_with_exact(model, n):
    trials = 100_000
    res = run_experiment(ExperimentPlan(model, (n,), tuple(Solution), trials, 2019))
    for s in Solution:
        q = exact_probability(model, s, n)
        tol = 4 * math.sqrt(q * (1 - q) / trials)
        assert abs(res.fraction(n, s) - q) <= max(tol, 1e-12), (s, q, res.fraction(n, s))


def test_csv_format():
    plan = ExperimentPlan(ModelSpec.voters(3, "1/n"), (5, 10), ("COND", "UC"), 7, 42)
    text = render_csv(run_experiment(plan))
    lines = text.split("\n")
    assert lines[0] == ",".join(CSV_HEADER)
    assert lines[-1] == ""
    assert len(lines) == 1 + 4 + 1
    assert lines[1].startswith('"voters:k=3,p=1/n",5,1/n,0.2,COND,7,')
    assert lines[1].endswith(",42")
    assert "\r" not in text


def test_analytic_limit_small():
    report = analytic_limit_check(1.0, 200, 2000, root_seed=5)
    assert report.row("COND").target == pytest.approx(1 - math.exp(-1))
    assert report.row("TC").target == pytest.approx((1 - math.exp(-1)) ** 2)
    for r in report.rows:
        assert abs(r.z) < 5
    with pytest.raises(RangeError):
        analytic_limit_check(3.0, 4, 10)


def test_analytic_limit_c_zero():
    report = analytic_limit_check(0.0, 50, 200)
    for r in report.rows:
        assert r.empirical == 0.0 and r.target == 0.0
