"""Regulatory-capital profiles: market risk, counterparty credit risk, CVA volatility.

Methodology (standardized approaches throughout):

- Exposure at default by the current exposure method: positive mark-to-market
  plus a notional add-on banded by residual maturity (interest-rate class:
  0% below 1y, 0.5% from 1y to 5y, 1.5% above).
- CCR capital = EAD x standardized risk weight x minimum capital ratio.
- CVA volatility capital: standardized charge in the large-portfolio limit,
  where the idiosyncratic term is dropped and the single-counterparty charge
  reduces to

      K = 2.33 * sqrt(h) * | w * (M * EAD - M_hedge * B_hedge) |

  from the general portfolio form
  K = 2.33 sqrt(h) sqrt( (0.5 sum_i w_i (M_i EAD_i - M_i^h B_i))^2 + 0.75 sum_i w_i^2 (...)^2 ).
  The effective maturity M is duration-weighted over the remaining schedule.
- Market risk: general interest-rate charge by the maturity-ladder method;
  net signed notionals are bucketed by residual maturity and charged with the
  published band weights (no vertical/horizontal disallowances, which is
  exact for the single netted book priced here).

Buying eligible credit protection removes the CVA volatility charge but does
not extinguish CCR capital: the exposure calculation switches to the
protection provider's risk weight when, and only when, that weight is better.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import DiscountCurve
from .exposure import ExposureProfile, SwapSpec

CVA_VAR_QUANTILE = 2.33
CVA_VAR_HORIZON = 1.0  # years

# Interest-rate add-on factors (current exposure method): below one year,
# one to five years inclusive, beyond five years.
CEM_ADDON_FACTORS = (0.000, 0.005, 0.015)

# General market-risk maturity-ladder weights (coupon >= 3% column):
# (upper bound of residual maturity band in years, charge weight).
MR_BAND_WEIGHTS = (
    (1.0 / 12.0, 0.0000),
    (3.0 / 12.0, 0.0020),
    (6.0 / 12.0, 0.0040),
    (1.0, 0.0070),
    (2.0, 0.0125),
    (3.0, 0.0175),
    (4.0, 0.0225),
    (5.0, 0.0275),
    (7.0, 0.0325),
    (10.0, 0.0375),
    (15.0, 0.0450),
    (20.0, 0.0525),
    (float("inf"), 0.0600),
)


@dataclass(frozen=True)
class CounterpartyProfile:
    """Rating-level counterparty data: spread, weights and assumed recovery."""

    rating: str
    cds_spread_bp: float
    risk_weight: float
    cva_weight: float
    recovery: float = 0.4

    def __post_init__(self):
        if self.cds_spread_bp < 0:
            raise ValueError("spread must be >= 0")
        if self.risk_weight <= 0 or self.cva_weight <= 0:
            raise ValueError("risk weights must be > 0")

    @property
    def cds_spread(self) -> float:
        return self.cds_spread_bp / 1e4


RATING_TABLE: dict[str, CounterpartyProfile] = {
    "AAA": CounterpartyProfile("AAA", 30.0, 0.20, 0.007),
    "A": CounterpartyProfile("A", 75.0, 0.50, 0.008),
    "BB": CounterpartyProfile("BB", 250.0, 1.00, 0.020),
    "CCC": CounterpartyProfile("CCC", 750.0, 1.50, 0.100),
}


def ead_cem(mtm: float, notional: float, residual_maturity: float) -> float:
    """Exposure at default under the current exposure method."""
    if notional < 0:
        raise ValueError("notional must be >= 0")
    if residual_maturity < 0:
        raise ValueError("residual maturity must be >= 0")
    if residual_maturity < 1.0:
        factor = CEM_ADDON_FACTORS[0]
    elif residual_maturity <= 5.0:
        factor = CEM_ADDON_FACTORS[1]
    else:
        factor = CEM_ADDON_FACTORS[2]
    return max(mtm, 0.0) + notional * factor


def ccr_capital(ead: float, risk_weight: float, min_ratio: float) -> float:
    """Counterparty-credit-risk capital: EAD x weight x minimum ratio."""
    if ead < 0 or risk_weight < 0 or min_ratio < 0:
        raise ValueError("inputs must be >= 0")
    return ead * risk_weight * min_ratio


def cva_var_capital(
    ead: float,
    cva_weight: float,
    maturity: float,
    hedge_notional: float = 0.0,
    hedge_maturity: float = 0.0,
    horizon: float = CVA_VAR_HORIZON,
) -> float:
    """Standardized CVA volatility charge, large-portfolio approximation."""
    if min(ead, cva_weight, maturity, hedge_notional, hedge_maturity, horizon) < 0:
        raise ValueError("inputs must be >= 0")
    net = maturity * ead - hedge_maturity * hedge_notional
    return CVA_VAR_QUANTILE * np.sqrt(horizon) * abs(cva_weight * net)


def market_risk_capital(positions) -> float:
    """General interest-rate market-risk charge from net banded positions.

    ``positions`` is an iterable of (residual_maturity, signed_notional);
    positions netting to zero within every band attract no charge.
    """
    uppers = [u for u, _ in MR_BAND_WEIGHTS]
    nets = np.zeros(len(uppers))
    for maturity, amount in positions:
        if maturity < 0:
            raise ValueError("residual maturity must be >= 0")
        band = next(i for i, u in enumerate(uppers) if maturity < u or u == float("inf"))
        nets[band] += amount
    weights = np.array([w for _, w in MR_BAND_WEIGHTS])
    return float(np.abs(nets) @ weights)


def remaining_duration(curve: DiscountCurve, spec: SwapSpec, t: float) -> float:
    """Discount-weighted average time to the swap's remaining payments."""
    times = spec.payment_times()
    alive = times > t + 1e-12
    if not alive.any():
        return 0.0
    dfs = np.asarray(curve.df(times[alive]))
    return float(np.sum((times[alive] - t) * dfs) / np.sum(dfs))


@dataclass
class CapitalProfile:
    """Capital requirement components along the exposure grid.

    ``k_mr``, ``k_ccr`` and ``k_cva`` are the unhedged requirements; the
    relief from a fully eligible credit hedge is the whole CVA charge plus
    the CCR saving from substituting the protection provider's risk weight
    (``k_ccr - k_ccr_hedged``).  The net requirement interpolates linearly in
    the hedge fraction.
    """

    grid: np.ndarray
    k_mr: np.ndarray
    k_ccr: np.ndarray
    k_ccr_hedged: np.ndarray
    k_cva: np.ndarray

    def __post_init__(self):
        n = len(self.grid)
        for name in ("k_mr", "k_ccr", "k_ccr_hedged", "k_cva"):
            if len(getattr(self, name)) != n:
                raise ValueError(f"{name} must match the grid length")

    @property
    def k_unhedged(self) -> np.ndarray:
        return self.k_mr + self.k_ccr + self.k_cva

    @property
    def k_relief(self) -> np.ndarray:
        return self.k_cva + (self.k_ccr - self.k_ccr_hedged)

    def net_components(self, hedge_fraction: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(MR, CCR, CVA-vol) parts of the net requirement at a hedge fraction."""
        psi = hedge_fraction
        ccr = self.k_ccr - psi * (self.k_ccr - self.k_ccr_hedged)
        cva = (1.0 - psi) * self.k_cva
        return self.k_mr, ccr, cva

    def net_total(self, hedge_fraction: float) -> np.ndarray:
        mr, ccr, cva = self.net_components(hedge_fraction)
        return mr + ccr + cva


def capital_profile(
    profile: ExposureProfile,
    counterparty: CounterpartyProfile,
    swaps,
    curve: DiscountCurve,
    min_ratio: float = 0.08,
    provider: CounterpartyProfile | None = None,
    mr_swaps=None,
) -> CapitalProfile:
    """Deterministic capital profile from an exposure profile.

    The CEM mark-to-market at each grid point is the undiscounted expected
    value of the netting set (floored at zero inside the EAD, as the current
    exposure method prescribes).  ``swaps`` are the uncollateralized trades
    backing the exposure (add-ons, durations); ``mr_swaps`` is the full book
    for market-risk netting and defaults to ``swaps``.  ``provider`` is the
    credit-protection seller whose risk weight caps the hedged CCR weight.
    """
    if isinstance(swaps, SwapSpec):
        swaps = (swaps,)
    swaps = tuple(swaps)
    mr_swaps = swaps if mr_swaps is None else tuple(mr_swaps)
    grid = profile.grid
    mtm = profile.mean_value_undiscounted

    hedged_weight = counterparty.risk_weight
    if provider is not None:
        hedged_weight = min(hedged_weight, provider.risk_weight)

    k_mr = np.zeros_like(grid)
    k_ccr = np.zeros_like(grid)
    k_ccr_h = np.zeros_like(grid)
    k_cva = np.zeros_like(grid)
    for i, u in enumerate(grid):
        ead = 0.0
        weighted_duration = 0.0
        total_notional = 0.0
        for spec in swaps:
            residual = spec.maturity - u
            if residual <= 1e-12:
                continue
            # One add-on per trade; the netted MtM enters once.
            ead += ead_cem(0.0, spec.notional, residual)
            weighted_duration += spec.notional * remaining_duration(curve, spec, u)
            total_notional += spec.notional
        ead += max(float(mtm[i]), 0.0)
        duration = weighted_duration / total_notional if total_notional else 0.0

        k_ccr[i] = ccr_capital(ead, counterparty.risk_weight, min_ratio)
        k_ccr_h[i] = ccr_capital(ead, hedged_weight, min_ratio)
        k_cva[i] = cva_var_capital(ead, counterparty.cva_weight, duration)
        k_mr[i] = market_risk_capital(
            (s.maturity - u, s.sign * s.notional)
            for s in mr_swaps
            if s.maturity - u > 1e-12
        )
    return CapitalProfile(grid=grid, k_mr=k_mr, k_ccr=k_ccr, k_ccr_hedged=k_ccr_h, k_cva=k_cva)
