"""Valuation-adjustment integrals over exposure and capital profiles.

Each adjustment is a deterministic time integral of profile quantities
weighted by the joint survival of issuer and counterparty,

    W(u) = exp( -integral_0^u [ lambda_B(s) + lambda_eff(s) ] ds ),

where ``lambda_eff`` is the effective counterparty hazard under partial
hedging.  Pathwise discounting already sits inside the exposure expectations
(EPE/ENE are discounted); deterministic quantities such as the capital
profile are discounted explicitly with the curve.

Quadrature: trapezoid on the profile grid, with the hazard and survival
factors evaluated at interval midpoints.  This is second-order accurate and
exact for constant integrands.

Components and signs (received cash positive):

    CVA    <= 0   expected loss on counterparty default
    DVA    >= 0   own-default windfall on negative exposure
    FCA    <= 0   funding cost of the positive exposure via own bonds
    COLVA         collateral-spread carry on the posted collateral
    KVA    <= 0   cost of holding capital net of any funding use (gamma_K >= r*phi)
    TVA           tax on the capital return minus the tax credit expected
                  from warehoused default losses; either sign

The collateral profile, when given, is the discounted expected collateral,
consistent with the discounted exposure profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .credit import CreditCurve, HedgePolicy, TaxPolicy
from .curves import DiscountCurve
from .exposure import ExposureProfile
from .regcap import CapitalProfile


@dataclass(frozen=True)
class XvaInputs:
    """Everything the adjustment integrals consume."""

    exposure: ExposureProfile
    issuer: CreditCurve
    counterparty: CreditCurve
    hedge: HedgePolicy
    tax: TaxPolicy
    discount: DiscountCurve
    cost_of_capital: float
    notional: float
    capital: CapitalProfile | None = None
    collateral_spread: float = 0.0
    collateral: np.ndarray | None = None

    def __post_init__(self):
        if self.capital is not None and not np.array_equal(
            self.capital.grid, self.exposure.grid
        ):
            raise ValueError("capital profile grid does not match the exposure grid")
        if self.collateral is not None and len(self.collateral) != len(self.exposure.grid):
            raise ValueError("collateral profile does not match the exposure grid")
        if self.notional <= 0:
            raise ValueError("notional must be > 0")


@dataclass(frozen=True)
class XvaErrors:
    """Monte Carlo standard errors propagated through the integrals.

    Conservative: profile errors are integrated as if perfectly correlated
    across grid points, which upper-bounds the true error of each component.
    """

    cva: float
    dva: float
    fca: float
    tva: float

    @property
    def total(self) -> float:
        return self.cva + self.dva + self.fca + self.tva


@dataclass(frozen=True)
class XvaBreakdown:
    """All adjustments in currency, with the notional for bps conversion."""

    cva: float
    dva: float
    fca: float
    colva: float
    kva_mr: float
    kva_ccr: float
    kva_cva: float
    tva: float
    notional: float
    se: XvaErrors | None = None

    @property
    def kva(self) -> float:
        return self.kva_mr + self.kva_ccr + self.kva_cva

    @property
    def total(self) -> float:
        return (
            self.cva + self.dva + self.fca + self.colva
            + self.kva_mr + self.kva_ccr + self.kva_cva + self.tva
        )

    def bps(self, value: float) -> float:
        return value / self.notional * 1e4

    def as_bps(self) -> dict[str, float]:
        out = {
            name: self.bps(getattr(self, name))
            for name in ("cva", "dva", "fca", "colva", "kva_mr", "kva_ccr", "kva_cva", "tva")
        }
        out["total"] = self.bps(self.total)
        return out


class _Quadrature:
    """Midpoint survival weights and endpoint averages on one grid."""

    def __init__(self, inputs: XvaInputs):
        grid = inputs.exposure.grid
        self.grid = grid
        self.dt = np.diff(grid)
        mids = 0.5 * (grid[:-1] + grid[1:])
        hedge = inputs.hedge
        # The effective hazard scales the counterparty hazard by a constant.
        self.effective_scale = (
            hedge.hedge_fraction
            + (1.0 - hedge.hedge_fraction) * (1.0 - hedge.price_of_risk)
        )
        cum = inputs.issuer.cumulative_hazard(mids) + self.effective_scale * (
            inputs.counterparty.cumulative_hazard(mids)
        )
        self.survival_mid = np.exp(-cum)
        self.lambda_issuer_mid = inputs.issuer.hazard(mids)
        self.lambda_cpty_mid = inputs.counterparty.hazard(mids)
        self.lambda_eff_mid = self.effective_scale * self.lambda_cpty_mid

    def integrate(self, rate_mid, profile_endpoint) -> float:
        """sum over intervals of rate(mid) * W(mid) * avg(profile) * dt."""
        avg = 0.5 * (profile_endpoint[:-1] + profile_endpoint[1:])
        return float(np.sum(rate_mid * self.survival_mid * avg * self.dt))


def cva(inputs: XvaInputs) -> float:
    """Counterparty-default loss on positive exposure; <= 0."""
    q = _Quadrature(inputs)
    lgd = 1.0 - inputs.counterparty.recovery
    return -lgd * q.integrate(q.lambda_eff_mid, inputs.exposure.epe)


def dva(inputs: XvaInputs) -> float:
    """Own-default gain on negative exposure; >= 0."""
    q = _Quadrature(inputs)
    lgd = 1.0 - inputs.issuer.recovery
    return -lgd * q.integrate(q.lambda_issuer_mid, inputs.exposure.ene)


def fca(inputs: XvaInputs) -> float:
    """Funding cost of the positive exposure through own bonds; <= 0."""
    q = _Quadrature(inputs)
    lgd = 1.0 - inputs.issuer.recovery
    return -lgd * q.integrate(q.lambda_issuer_mid, inputs.exposure.epe)


def colva(inputs: XvaInputs) -> float:
    """Carry on posted collateral at the collateral spread."""
    if inputs.collateral is None:
        return 0.0
    q = _Quadrature(inputs)
    return -inputs.collateral_spread * q.integrate(1.0, np.asarray(inputs.collateral))


def kva(inputs: XvaInputs) -> tuple[float, tuple[float, float, float]]:
    """Cost of capital, total and split (MR, CCR, CVA-vol).

    The funding benefit of capital enters through the forward rate times the
    usable fraction; the capital profile itself is deterministic, so the
    stochastic discount factor reduces to the curve discount factor.
    """
    if inputs.capital is None:
        return 0.0, (0.0, 0.0, 0.0)
    q = _Quadrature(inputs)
    grid = inputs.exposure.grid
    d = np.asarray(inputs.discount.df(grid))
    fwd = np.asarray(inputs.discount.forward(grid))
    carry = inputs.cost_of_capital - fwd * inputs.hedge.capital_funding_fraction
    parts = []
    for component in inputs.capital.net_components(inputs.hedge.hedge_fraction):
        parts.append(-q.integrate(1.0, carry * d * component))
    return sum(parts), tuple(parts)


def tva(inputs: XvaInputs) -> float:
    """Tax adjustment: capital-return profits are taxed, warehoused default
    losses earn an expected tax credit (and the offsetting compensator income
    is itself taxable only when the policy says so)."""
    q = _Quadrature(inputs)
    rate = inputs.tax.rate
    if rate == 0.0:
        return 0.0
    grid = inputs.exposure.grid
    hedge = inputs.hedge
    total = 0.0

    if inputs.capital is not None:
        d = np.asarray(inputs.discount.df(grid))
        k_net = inputs.capital.net_total(hedge.hedge_fraction)
        taxed_flow = rate * inputs.cost_of_capital * d * k_net
        if inputs.tax.accruals_taxed:
            lgd_b = 1.0 - inputs.issuer.recovery
            taxed_flow = taxed_flow + rate * np.asarray(
                inputs.issuer.hazard(grid)
            ) * lgd_b * inputs.exposure.epe
        total -= q.integrate(1.0, taxed_flow)
    elif inputs.tax.accruals_taxed:
        lgd_b = 1.0 - inputs.issuer.recovery
        taxed_flow = rate * np.asarray(inputs.issuer.hazard(grid)) * lgd_b * inputs.exposure.epe
        total -= q.integrate(1.0, taxed_flow)

    warehoused = (1.0 - hedge.hedge_fraction) * (1.0 - hedge.price_of_risk)
    if warehoused != 0.0:
        lgd_c = 1.0 - inputs.counterparty.recovery
        credit = rate * warehoused * lgd_c
        total += q.integrate(q.lambda_cpty_mid, credit * inputs.exposure.epe)
        if inputs.tax.compensator_taxed:
            # The compensator accrual offsets the expected default loss grossed
            # up by its own tax effect, hence the (1 + rate) factor.
            total -= q.integrate(
                q.lambda_cpty_mid, rate * warehoused * (1.0 + rate) * lgd_c * inputs.exposure.epe
            )
    return total


def standard_errors(inputs: XvaInputs) -> XvaErrors:
    """Upper-bound Monte Carlo errors for the exposure-driven components."""
    q = _Quadrature(inputs)
    lgd_c = 1.0 - inputs.counterparty.recovery
    lgd_b = 1.0 - inputs.issuer.recovery
    se_cva = lgd_c * q.integrate(q.lambda_eff_mid, inputs.exposure.se_epe)
    se_dva = lgd_b * q.integrate(q.lambda_issuer_mid, inputs.exposure.se_ene)
    se_fca = lgd_b * q.integrate(q.lambda_issuer_mid, inputs.exposure.se_epe)
    warehoused = (1.0 - inputs.hedge.hedge_fraction) * (1.0 - inputs.hedge.price_of_risk)
    se_tva = inputs.tax.rate * abs(warehoused) * lgd_c * q.integrate(
        q.lambda_cpty_mid, inputs.exposure.se_epe
    )
    return XvaErrors(cva=se_cva, dva=se_dva, fca=se_fca, tva=se_tva)


def breakdown(inputs: XvaInputs) -> XvaBreakdown:
    """Assemble every adjustment; the total is the exact float sum of the parts."""
    kva_total, (kva_mr, kva_ccr, kva_cva) = kva(inputs)
    del kva_total
    return XvaBreakdown(
        cva=cva(inputs),
        dva=dva(inputs),
        fca=fca(inputs),
        colva=colva(inputs),
        kva_mr=kva_mr,
        kva_ccr=kva_ccr,
        kva_cva=kva_cva,
        tva=tva(inputs),
        notional=inputs.notional,
        se=standard_errors(inputs),
    )
