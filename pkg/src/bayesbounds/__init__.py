"""Bounds on Bayes risk for M-ary hypothesis testing, with the equivocation
and random-coding consequences for memoryless channels."""

from .bounds import (
    BoundReport,
    bd_bounds,
    full_report,
    harmonic_pair,
    hellman_raviv_bound,
    improved_equivocation_bound,
    improved_equivocation_bound_avg,
    power_mean_upper,
    quadratic_bounds,
    renyi_bound,
)
from .channels import (
    BiAwgnChannel,
    Dmc,
    bec,
    bsc,
    capacity_bec,
    capacity_biawgn,
    capacity_bsc,
    capacity_upper_bound,
    channel_from_spec,
    mutual_information,
    rho_bec,
    rho_biawgn,
    rho_bsc,
    rho_discrete,
)
from .hypothesis_testing import (
    BinaryContinuousProblem,
    appendix1_problem,
    bhattacharyya_risk_bound,
    chernoff_risk_bound,
    decision_boundaries,
    exact_bayes_risk,
    gamma_sweep,
    harmonic_risk_bounds,
)
from .numerics import QuadratureSpec, find_roots, integrate, integrate_real_line
from .prob_core import (
    Pmf,
    Posterior,
    entropy,
    make_pmf,
    make_posterior,
    map_conditional_error,
    posterior_from_likelihoods,
)
from .random_coding import (
    EnsembleParams,
    ensemble_average_error_exact,
    ensemble_error_lower_bound,
    equivocation_lower_bound,
    simulate_ensemble,
)

__version__ = "0.1.0"
