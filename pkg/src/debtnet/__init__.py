"""Clearing payments, bailout planning and debt-forgiveness games on financial networks."""

from .analytics import extended_threat_index, increased_liquidity, liquidity, threat_index
from .bailout import (
    GreedyRound,
    GreedyTrace,
    greedy_injections,
    min_budget_solvency,
    min_shift_amount,
    optimal_injections_enumerative,
    optimal_injections_lp,
)
from .clearing import ClearingResult, ClearingViolation, greatest_clearing, is_clearing, least_clearing, phi
from .debt_relief import RemovalObjective, RemovalResult, greedy_removal, optimal_removal
from .errors import (
    ConvergenceError,
    DebtNetError,
    GuardError,
    InfeasibleError,
    InvalidNetworkError,
    ParseError,
    PlanError,
    PolicyError,
    ProfileError,
    SingularSystemError,
    UnboundedError,
)
from .games import (
    Cycle,
    Deviation,
    Equilibrium,
    Game,
    GameReport,
    PolicySpec,
    Truncated,
    best_response,
    br_dynamics,
    enumerate_equilibria,
    is_equilibrium,
    quality_report,
    utilities,
)
from .io import parse_network, serialize_network
from .kernels import BACKEND
from .network import (
    FinancialNetwork,
    InjectionPlan,
    StrategyProfile,
    Violation,
    apply_removals,
    inject_externals,
    relative_liabilities,
    validate_network,
)
from .numeric import TOL

__version__ = "0.1.0"
