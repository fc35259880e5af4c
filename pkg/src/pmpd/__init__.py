"""Persistent monitoring with a depot: revisit-time evaluation, lower bounds,
walk constructions for long walks and a budgeted exact search."""

from .bounds import BoundReport, CaseTag, Modality, classify_asymptotic, lower_bound, q_decompose
from .builder import ConstructionResult, Scheme, build, conjecture1_check, derive_intermediates, plan
from .evaluator import revisit_time, target_gaps, travel_time
from .exact import solve_exact
from .instance import DEPOT, Instance, from_matrix, from_points, load_instance, random_instance
from .results import Certificate, SolveResult, Status
from .seeds import SeedWalks, compute_seeds
from .walk import Walk, WalkKind, pmp, pmpd

__all__ = [
    "BoundReport", "CaseTag", "Certificate", "ConstructionResult", "DEPOT", "Instance", "Modality",
    "Scheme", "SeedWalks", "SolveResult", "Status", "Walk", "WalkKind", "build", "classify_asymptotic",
    "compute_seeds", "conjecture1_check", "derive_intermediates", "from_matrix", "from_points",
    "load_instance", "lower_bound", "plan", "pmp", "pmpd", "q_decompose", "random_instance",
    "revisit_time", "solve_exact", "target_gaps", "travel_time",
]

__version__ = "0.1.0"
