"""Valuation adjustments under partial credit hedging, with capital and tax.

Public surface: market/credit primitives, the Monte Carlo exposure engine,
standardized-capital profiles, the adjustment integrals, and a
finite-difference verifier that recomputes the same economics independently.
"""

from .credit import (
    CloseOutState,
    CreditCurve,
    HedgePolicy,
    TaxPolicy,
    closeout_values,
    compensator_rate,
    counterparty_hedge_error,
    effective_hazard,
    hazard_from_spread,
    tax_jump,
    taxable_flow,
)
from .curves import DiscountCurve
from .exposure import (
    ExposureProfile,
    SwapSpec,
    annuity,
    exposure_profile,
    make_exposure_grid,
    par_rate,
    portfolio_value,
    swap_value,
)
from .pde import (
    Grid,
    GridResolutionWarning,
    OracleDecomposition,
    PdeProblem,
    PdeSolution,
    ReplicationState,
    VerificationReport,
    black_scholes_value,
    density_expectations,
    quadrature_oracle,
    replication_state,
    solve_vhat,
    verify_decomposition,
)
from .ratemodel import PathSet, ShortRateModel, simulate_paths
from .regcap import (
    RATING_TABLE,
    CapitalProfile,
    CounterpartyProfile,
    capital_profile,
    ccr_capital,
    cva_var_capital,
    ead_cem,
    market_risk_capital,
    remaining_duration,
)
from .xva import XvaBreakdown, XvaErrors, XvaInputs, breakdown, colva, cva, dva, fca, kva, tva

__version__ = "0.1.0"

__all__ = [
    "CloseOutState",
    "CreditCurve",
    "HedgePolicy",
    "TaxPolicy",
    "closeout_values",
    "compensator_rate",
    "counterparty_hedge_error",
    "effective_hazard",
    "hazard_from_spread",
    "tax_jump",
    "taxable_flow",
    "DiscountCurve",
    "ExposureProfile",
    "SwapSpec",
    "annuity",
    "exposure_profile",
    "make_exposure_grid",
    "par_rate",
    "portfolio_value",
    "swap_value",
    "Grid",
    "GridResolutionWarning",
    "OracleDecomposition",
    "PdeProblem",
    "PdeSolution",
    "ReplicationState",
    "VerificationReport",
    "black_scholes_value",
    "density_expectations",
    "quadrature_oracle",
    "replication_state",
    "solve_vhat",
    "verify_decomposition",
    "PathSet",
    "ShortRateModel",
    "simulate_paths",
    "RATING_TABLE",
    "CapitalProfile",
    "CounterpartyProfile",
    "capital_profile",
    "ccr_capital",
    "cva_var_capital",
    "ead_cem",
    "market_risk_capital",
    "remaining_duration",
    "XvaBreakdown",
    "XvaErrors",
    "XvaInputs",
    "breakdown",
    "colva",
    "cva",
    "dva",
    "fca",
    "kva",
    "tva",
    "__version__",
]
