"""Tournament solutions on large random tournaments.

Bit-parallel COND, CNL, top cycle, uncovered set and iterated uncovered set;
Model 1 (independent edges, including the Condorcet and gap models) and
Model 2 (majority of random voters) generators with counter-based seeding;
a deterministic Monte Carlo engine with an exact enumeration oracle; and
integer majorization utilities.
"""
from .core import (
    Tournament,
    dominates,
    enumerate_all_tournaments,
    out_degree_vector,
    parse_tournament,
    read_tournament,
    render_tournament,
    tournament_from_matrix,
    write_tournament,
)
from .models import (
    EdgeProbabilityMatrix,
    ModelSpec,
    condorcet_matrix,
    gap_matrix,
    parse_model,
    sample,
    sample_model1,
    sample_model2,
)
from .montecarlo import ExperimentPlan, ExperimentResult, analytic_limit_check, exact_probability, run_experiment
from .rng import Seed
from .solutions import (
    AlternativeSet,
    Solution,
    cnl,
    cond,
    condorcet_winner,
    iterated_uncovered_set,
    restrict,
    selects_all,
    solve,
    top_cycle,
    uncovered_set,
)

__all__ = [name for name in dir() if not name.startswith("_")]
