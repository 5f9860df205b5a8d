"""Power allocation and hybrid-versus-OMA analysis for two-user uplink hybrid NOMA."""

__version__ = "0.1.0"

from .model import (  # noqa: E402
    ChannelGains,
    InvalidParameterError,
    SystemParams,
    db_to_linear,
    epsilon0,
    linear_to_db,
    sample_gains,
    substream,
    tau_m,
)
from .allocator import PowerSplit, grid_oracle, optimal_rate, optimal_split, split_rate  # noqa: E402
from .comparator import ComparisonOutcome, compare, energy, hybrid_beats_oma, oma_rate  # noqa: E402
from .analytic import (  # noqa: E402
    ProbabilityBreakdown,
    QuadratureConfig,
    p_breakdown,
    p_wn_asymptotic,
    p_wn_exact,
    p_wn_limit_fixed_rho_m,
    p_wn_limit_fixed_rho_n,
)
from .montecarlo import McConfig, McEstimate, ergodic_rates, estimate_case_probs, estimate_p_wn  # noqa: E402
