"""Bicriteria (makespan, cost) orientation solvers with LP rounding and an exhaustive oracle."""
from .drivers import (
    GB, GBU, GBUH, SRGB, InvariantFailure, SolveReport, VariantConfig, binary_search_makespan, cubic_root,
    gap_reduction, search_target, select_parameters, solve_bicriteria,
)
from .estimator import GraphBalancer, check_instance, check_is_fitted
from .framework import framework_round, local_step
from .instances import (
    gen_gbu_cycle, gen_gbu_paths, gen_lb_cost, gen_random, gen_tightness_a, gen_tightness_b,
)
from .lp import FractionalSolution, RelaxationSpec, build_relaxation, relax_and_solve, solve_lp
from .model import (
    Edge, Endpoint, Evaluation, Infeasible, InputError, Instance, Orientation, dumps, evaluate, loads_json,
    make_instance, read_instance, scale_to_target, write_instance,
)
from .oracle import CapExceeded, OracleResult, oracle
from .rounding import st_round
from .thresholds import ConstantOne, StepAt, StepHalf, StepThird, TwoStep

__version__ = "0.1.0"
