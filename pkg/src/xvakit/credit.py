"""Credit, close-out and tax building blocks.

Everything in this module is a pure function of scalar (or numpy-broadcast)
inputs: hazard-rate relations, close-out values on default, the hedging error
and its compensating accrual when counterparty default risk is only partially
hedged, and the cash flows that attract tax.

Sign convention: cash received by the issuer is positive.  Default losses
therefore show up as negative hedge errors, and the compensator that offsets
their physical-measure expectation is positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class CreditCurve:
    """Piecewise-constant hazard-rate curve with a flat recovery assumption.

    ``hazard_rates[i]`` applies on the interval (pillars[i-1], pillars[i]]
    (with an implicit left endpoint at 0); the last rate extends flat beyond
    the final pillar.  Survival is exp(-integrated hazard).
    """

    pillars: tuple[float, ...]
    hazard_rates: tuple[float, ...]
    recovery: float
    _knots: np.ndarray = field(init=False, repr=False)
    _cum: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.pillars = tuple(float(p) for p in self.pillars)
        self.hazard_rates = tuple(float(h) for h in self.hazard_rates)
        self.recovery = float(self.recovery)
        if len(self.pillars) != len(self.hazard_rates):
            raise ValueError("pillars and hazard_rates must have the same length")
        if not self.pillars:
            raise ValueError("curve needs at least one pillar")
        if self.pillars[0] <= 0.0:
            raise ValueError("first pillar must be > 0")
        for a, b in zip(self.pillars, self.pillars[1:]):
            if b <= a:
                raise ValueError("pillars must be strictly increasing")
        if any(h < 0 for h in self.hazard_rates):
            raise ValueError("hazard rates must be >= 0")
        if not 0.0 <= self.recovery < 1.0:
            raise ValueError("recovery must lie in [0, 1)")
        self._knots = np.concatenate([[0.0], np.asarray(self.pillars)])
        self._cum = np.concatenate(
            [[0.0], np.cumsum(np.asarray(self.hazard_rates) * np.diff(self._knots))]
        )

    @classmethod
    def flat(cls, hazard: float, recovery: float, horizon: float = 50.0) -> "CreditCurve":
        return cls((horizon,), (hazard,), recovery)

    def hazard(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("time must be >= 0")
        rates = np.asarray(self.hazard_rates)
        idx = np.clip(np.searchsorted(self._knots, t_arr, side="left") - 1, 0, len(rates) - 1)
        out = rates[idx]
        if np.isscalar(t) or np.ndim(t) == 0:
            return float(out)
        return out

    def cumulative_hazard(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("time must be >= 0")
        inside = np.interp(t_arr, self._knots, self._cum)
        beyond = self._cum[-1] + self.hazard_rates[-1] * (t_arr - self.pillars[-1])
        out = np.where(t_arr > self.pillars[-1], beyond, inside)
        if np.isscalar(t) or np.ndim(t) == 0:
            return float(out)
        return out

    def survival(self, t):
        return np.exp(-self.cumulative_hazard(t))


@dataclass(frozen=True)
class HedgePolicy:
    """Dials of the partial default hedge.

    hedge_fraction
        Share of the full counterparty-bond hedge actually held (0 = fully
        warehoused, 1 = fully hedged).
    price_of_risk
        Proportional market price of default risk: the physical-measure
        hazard is ``(1 - price_of_risk)`` times the risk-neutral one.
    capital_funding_fraction
        Share of the capital requirement usable to offset bond funding.
    """

    hedge_fraction: float
    price_of_risk: float = 0.0
    capital_funding_fraction: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.hedge_fraction <= 1.0:
            raise ValueError("hedge_fraction must lie in [0, 1]")
        if not 0.0 <= self.capital_funding_fraction <= 1.0:
            raise ValueError("capital_funding_fraction must lie in [0, 1]")
        if self.price_of_risk > 1.0:
            raise ValueError("price_of_risk above 1 implies a negative physical hazard")


@dataclass(frozen=True)
class TaxPolicy:
    """Effective tax treatment applied to profits and losses as they occur.

    ``accruals_taxed`` states whether the tax authority also taxes the
    accrual stream that offsets own-credit P&L bleed (it does not when the
    bank is viewed as a going concern).  ``compensator_taxed`` optionally
    adds the default-risk compensator income to the taxable flow; off by
    default.
    """

    rate: float
    accruals_taxed: bool = False
    compensator_taxed: bool = False

    def __post_init__(self):
        if not 0.0 <= self.rate < 1.0:
            raise ValueError("tax rate must lie in [0, 1)")


@dataclass(frozen=True)
class CloseOutState:
    """Inputs of the close-out functions: portfolio value, collateral, recoveries."""

    value: float
    collateral: float = 0.0
    issuer_recovery: float = 0.4
    counterparty_recovery: float = 0.4


def hazard_from_spread(spread: float, recovery: float) -> float:
    """Flat hazard rate implied by a flat credit spread: spread / (1 - R)."""
    if not 0.0 <= recovery < 1.0:
        raise ValueError("recovery must lie in [0, 1) for a positive loss given default")
    if spread < 0:
        raise ValueError("spread must be >= 0")
    return spread / (1.0 - recovery)


def effective_hazard(hazard: float, hedge_fraction: float, price_of_risk: float):
    """Hazard rate blending the hedged (risk-neutral) and warehoused (physical) parts.

    Returns ``psi * lam + (1 - psi) * (1 - xi) * lam``: the risk-neutral rate
    at full hedging, the physical rate at none, linear in between.
    """
    psi = hedge_fraction
    if not 0.0 <= psi <= 1.0:
        raise ValueError("hedge_fraction must lie in [0, 1]")
    if np.any(np.asarray(hazard) < 0):
        raise ValueError("hazard must be >= 0")
    if np.any(np.asarray(hazard) * (1.0 - price_of_risk) < 0):
        raise ValueError("physical hazard (1 - xi) * lam must be >= 0")
    return psi * hazard + (1.0 - psi) * (1.0 - price_of_risk) * hazard


def closeout_values(state: CloseOutState) -> tuple[float, float]:
    """Portfolio values just after issuer default and counterparty default.

    The surviving party keeps collateral and recovers only a fraction of what
    the defaulted party owes:

        on issuer default:        (V-X)+ + R_B (V-X)- + X
        on counterparty default:  R_C (V-X)+ + (V-X)- + X
    """
    gap = state.value - state.collateral
    pos = max(gap, 0.0)
    neg = min(gap, 0.0)
    g_issuer = pos + state.issuer_recovery * neg + state.collateral
    g_counterparty = state.counterparty_recovery * pos + neg + state.collateral
    return g_issuer, g_counterparty


def counterparty_hedge_error(
    closeout: float, economic_value: float, hedge_fraction: float, default_tax_jump: float = 0.0
):
    """Jump in the hedged position's value when the counterparty defaults.

    Zero under a full hedge; otherwise the unhedged share of the gap between
    the close-out value (plus the tax effect of the default) and the carried
    economic value.
    """
    if not 0.0 <= hedge_fraction <= 1.0:
        raise ValueError("hedge_fraction must lie in [0, 1]")
    return (1.0 - hedge_fraction) * (closeout - economic_value + default_tax_jump)


def compensator_rate(
    closeout: float,
    economic_value: float,
    hedge_fraction: float,
    price_of_risk: float,
    hazard: float,
    default_tax_jump: float = 0.0,
):
    """Accrual rate compensating the expected warehoused default loss.

    Chosen so that the physical-measure expectation of the default jump plus
    this accrual is zero: minus the hedge error times the physical hazard.
    """
    eps = counterparty_hedge_error(closeout, economic_value, hedge_fraction, default_tax_jump)
    return -eps * hazard * (1.0 - price_of_risk)


def tax_jump(value: float, collateral: float, counterparty_recovery: float, tax_rate: float):
    """Tax effect of the value jump on counterparty default (fully warehoused case).

    The default loss ``value - closeout`` is tax deductible, so the jump is
    ``-tax_rate * (value - closeout)`` = ``-tax_rate * (1-R_C) * (V-X)+``.
    """
    if not 0.0 <= tax_rate < 1.0:
        raise ValueError("tax rate must lie in [0, 1)")
    gap = value - collateral
    loss = (1.0 - counterparty_recovery) * max(gap, 0.0)
    return -tax_rate * loss


def taxable_flow(
    cost_of_capital: float,
    capital_unhedged: float,
    capital_relief: float,
    hedge_fraction: float,
    issuer_hazard: float,
    issuer_error_base: float,
    issuer_error_capital: float,
    accruals_taxed: bool,
):
    """Cash flow liable to tax at non-default times.

    The return paid on held capital is always taxed; the accrual stream that
    offsets own-credit P&L bleed is taxed only when ``accruals_taxed``.  The
    income earned *on* the capital itself is not netted off: the source of
    the profit is irrelevant to the tax authority.
    """
    flow = cost_of_capital * (capital_unhedged - hedge_fraction * capital_relief)
    if accruals_taxed:
        flow += issuer_hazard * (issuer_error_capital + issuer_error_base)
    return flow
