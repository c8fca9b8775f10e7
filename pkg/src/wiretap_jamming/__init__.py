"""Secrecy rate optimisation for a two-user Gaussian MIMO wiretap channel
where the second user either stays silent, jams with Gaussian noise, or
jams while sending its own open messages."""

from .channel import (
    ChannelRealization,
    InputCovariance,
    MutualInformation,
    RateReport,
    RateTriple,
    RegionMembership,
    Scheme,
    SecrecyComponents,
    mutual_information,
    rate_gn_jamming,
    rate_no_jamming,
    rate_sit_cj,
    region_membership,
    scheme_rate,
    secrecy_components,
    weighted_logdet_rate,
)
from .errors import ConvergenceError, DomainError
from .experiment import (
    Dims,
    ExperimentConfig,
    ResultRow,
    generate_channel,
    run_experiment,
    solve_scheme,
)
from .mimo import (
    Candidate,
    MimoSolution,
    SolverBudget,
    WaterfillMode,
    optimize_gn_mimo,
    optimize_no_mimo,
    optimize_sit_cj_mimo,
    sdlc1_maximize,
    sdlc2_step,
    waterfill_theorem5,
)
from .simdiag import SDFactorization, simultaneous_diagonalize
from .simo import (
    SimoSolution,
    breakpoint_p0_prime,
    quadratic_coefficients,
    solve_gn_simo,
    solve_no_jamming_simo,
    solve_sit_cj_simo,
    solve_subproblem_hat,
    solve_subproblem_tilde,
)

__version__ = "0.1.0"
