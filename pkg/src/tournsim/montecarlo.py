"""Monte Carlo estimates of Pr[solution selects all alternatives].

Each cell ``(model, n)`` draws ``trials`` tournaments; trial ``t`` uses the
stream ``Seed(cell_root(root_seed, str(model), n), t)``. Every requested
solution is evaluated on the same sampled tournament, and counts are integer
tallies merged across workers, so results do not depend on how trials are
split between processes.
"""
from __future__ import annotations

import csv
import io
import math
import multiprocessing
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import _kernels as K
from .core import ENUMERATION_CAP, Tournament, enumeration_bits, pair_count
from .errors import CapExceededError, PlanError, RangeError, TournsimError
from .models import EdgeProbabilityMatrix, ModelSpec
from .rng import cell_root
from .solutions import Solution

CSV_HEADER = ("model", "n", "p_expr", "p_value", "solution", "trials", "selects_all", "fraction", "root_seed")
DEFAULT_TRIALS = 10_000
DEFAULT_SEED = 20190710


@dataclass(frozen=True)
class ExperimentPlan:
    model: ModelSpec
    n_values: tuple[int, ...]
    solutions: tuple[Solution, ...]
    trials: int = DEFAULT_TRIALS
    root_seed: int = DEFAULT_SEED

    def __post_init__(self):
        object.__setattr__(self, "n_values", tuple(int(n) for n in self.n_values))
        object.__setattr__(self, "solutions", tuple(Solution.parse(s) for s in self.solutions))
        if self.trials < 1:
            raise PlanError(f"trials must be at least 1, got {self.trials}")
        if not self.n_values:
            raise PlanError("n_values must be nonempty")
        if any(b <= a for a, b in zip(self.n_values, self.n_values[1:])):
            raise PlanError(f"n_values must be strictly increasing: {self.n_values}")
        if self.n_values[0] < 1:
            raise PlanError("n values must be positive")
        if not self.solutions:
            raise PlanError("solutions must be nonempty")
        if len(set(self.solutions)) != len(self.solutions):
            raise PlanError("solutions must not repeat")
        if not 0 <= self.root_seed < 2**64:
            raise PlanError("root_seed must fit in 64 bits")


@dataclass(frozen=True)
class Cell:
    model: str
    n: int
    p_expr: str
    p_value: float | None
    solution: Solution
    trials: int
    selects_all: int

    @property
    def fraction(self) -> float:
        return self.selects_all / self.trials


@dataclass
class ExperimentResult:
    cells: list[Cell]
    root_seed: int
    seconds: float = field(default=0.0, compare=False)

    def fraction(self, n: int, solution) -> float:
        return self.cell(n, solution).fraction

    def cell(self, n: int, solution) -> Cell:
        solution = Solution.parse(solution)
        for c in self.cells:
            if c.n == n and c.solution is solution:
                return c
        raise KeyError((n, solution))


def _count_chunk(args):
    probs, n, root, t0, t1, need_tc, need_uc = args
    return K.count_cell(probs, n, np.uint64(root), t0, t1, need_tc, need_uc)


def _chunks(trials: int, workers: int) -> list[tuple[int, int]]:
    size = math.ceil(trials / workers)
    return [(t, min(t + size, trials)) for t in range(0, trials, size)]


def count_cell(model: ModelSpec, n: int, trials: int, root_seed: int,
               solutions: Sequence[Solution] = tuple(Solution), workers: int = 1,
               pool=None) -> np.ndarray:
    """Selects-all counts for one cell, indexed by ``Solution.flag``."""
    probs = np.ascontiguousarray(model.voter_probs(n), dtype=np.float64)
    root = cell_root(root_seed, str(model), n)
    need_uc = any(s in (Solution.UC, Solution.UCINF) for s in solutions)
    need_tc = need_uc or Solution.TC in solutions
    jobs = [(probs, n, root, t0, t1, need_tc, need_uc) for t0, t1 in _chunks(trials, max(1, workers))]
    if pool is None or len(jobs) == 1:
        parts = [_count_chunk(j) for j in jobs]
    else:
        parts = list(pool.map(_count_chunk, jobs))
    return np.sum(parts, axis=0)


def run_experiment(plan: ExperimentPlan, workers: int = 1) -> ExperimentResult:
    import time

    start = time.perf_counter()
    model_text = str(plan.model)
    pool = None
    if workers > 1:
        pool = ProcessPoolExecutor(workers, mp_context=multiprocessing.get_context("fork"))
    cells = []
    try:
        for n in plan.n_values:
            try:
                p_value = plan.model.p_value(n)
                counts = count_cell(plan.model, n, plan.trials, plan.root_seed, plan.solutions, workers, pool)
            except TournsimError as exc:
                raise PlanError(f"cell ({model_text}, n={n}): {exc}", cell=(model_text, n)) from exc
            p_expr = "" if plan.model.p is None else str(plan.model.p)
            for s in plan.solutions:
                cells.append(Cell(model_text, n, p_expr, p_value, s, plan.trials, int(counts[s.flag])))
    finally:
        if pool is not None:
            pool.shutdown()
    return ExperimentResult(cells, plan.root_seed, time.perf_counter() - start)


def _fmt(x) -> str:
    return "" if x is None else f"{x:.6g}"


def render_csv(result: ExperimentResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for c in result.cells:
        writer.writerow([c.model, c.n, c.p_expr, _fmt(c.p_value), c.solution.value,
                         c.trials, c.selects_all, _fmt(c.fraction), result.root_seed])
    return buf.getvalue()


# --- exact oracle -------------------------------------------------------------

@lru_cache(maxsize=None)
def _selects_all_table(n: int) -> np.ndarray:
    """Selects-all flags for every enumerated tournament, shape ``(2**m, 5)``."""
    table = enumeration_bits(n)
    out = np.zeros((table.shape[0], 5), dtype=bool)
    flags = np.zeros(5, dtype=np.bool_)
    for idx, upper in enumerate(table):
        T = Tournament.from_upper_bits(n, upper)
        K.selects_all_flags(T.bits, n, True, True, flags)
        out[idx] = flags
    out.setflags(write=False)
    return out


def tournament_weights(matrix: EdgeProbabilityMatrix) -> np.ndarray:
    """Probability of each enumerated tournament under Model 1."""
    if matrix.n > ENUMERATION_CAP:
        raise CapExceededError(f"exact enumeration is capped at n={ENUMERATION_CAP}")
    table = enumeration_bits(matrix.n)
    up = matrix.upper()
    return np.prod(np.where(table, up, 1.0 - up), axis=1)


def exact_probability(model, solution, n: int | None = None) -> float:
    """Pr[solution selects all] by summing over all labeled tournaments.

    ``model`` is an :class:`EdgeProbabilityMatrix` or a :class:`ModelSpec`
    (with ``n``); voter models reduce exactly to their per-pair majority
    probabilities. Floating error is below ``2**m * n**2 * eps``.
    """
    if isinstance(model, ModelSpec):
        if n is None:
            raise RangeError("n is required for a model template")
        if n > ENUMERATION_CAP:
            raise CapExceededError(f"exact enumeration is capped at n={ENUMERATION_CAP}")
        model = model.edge_matrix(n)
    if model.n > ENUMERATION_CAP:
        raise CapExceededError(f"exact enumeration is capped at n={ENUMERATION_CAP}")
    flag = Solution.parse(solution).flag
    mask = _selects_all_table(model.n)[:, flag]
    weights = tournament_weights(model)
    return math.fsum(weights[mask].tolist())


# --- analytic limits ----------------------------------------------------------

@dataclass(frozen=True)
class LimitRow:
    solution: Solution
    empirical: float
    target: float
    stderr: float

    @property
    def z(self) -> float:
        return (self.empirical - self.target) / self.stderr if self.stderr > 0 else 0.0


@dataclass(frozen=True)
class LimitReport:
    c: float
    n: int
    trials: int
    rows: tuple[LimitRow, ...]

    def row(self, solution) -> LimitRow:
        solution = Solution.parse(solution)
        return next(r for r in self.rows if r.solution is solution)


def analytic_limit_check(c: float, n: int, trials: int, root_seed: int = DEFAULT_SEED,
                         workers: int = 1) -> LimitReport:
    """Condorcet model at ``p = c/n`` against its large-n limits.

    Targets: ``1 - e^-c`` for COND and CNL, ``(1 - e^-c)^2`` for TC.
    """
    if c < 0 or n < 1 or c / n > 0.5:
        raise RangeError(f"need 0 <= c/n <= 0.5, got c={c}, n={n}")
    model = ModelSpec.condorcet(f"{c!r}/n")
    sols = (Solution.COND, Solution.CNL, Solution.TC)
    result = run_experiment(ExperimentPlan(model, (n,), sols, trials, root_seed), workers)
    limit = 1.0 - math.exp(-c)
    targets = {Solution.COND: limit, Solution.CNL: limit, Solution.TC: limit**2}
    rows = []
    for s in sols:
        q = result.fraction(n, s)
        rows.append(LimitRow(s, q, targets[s], math.sqrt(max(q * (1 - q), 1e-300) / trials)))
    return LimitReport(c, n, trials, tuple(rows))
