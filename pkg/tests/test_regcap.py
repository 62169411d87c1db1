"""Standardized capital: EAD, CCR, CVA-vol, market risk and profiles."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from xvakit import (
    RATING_TABLE,
    DiscountCurve,
    ExposureProfile,
    SwapSpec,
    capital_profile,
    ccr_capital,
    cva_var_capital,
    ead_cem,
    market_risk_capital,
    remaining_duration,
)

finite = dict(allow_nan=False, allow_infinity=False)


class TestEadCem:
    def test_negative_mtm_floored(self):
        assert ead_cem(-5.0, 100.0, 10.0) == pytest.approx(1.5)

    def test_mid_band(self):
        assert ead_cem(2.0, 100.0, 3.0) == pytest.approx(2.5)

    def test_short_band_zero_addon(self):
        assert ead_cem(0.0, 100.0, 0.5) == 0.0

    def test_band_edges(self):
        assert ead_cem(0.0, 100.0, 1.0) == pytest.approx(0.5)
        assert ead_cem(0.0, 100.0, 5.0) == pytest.approx(0.5)
        assert ead_cem(0.0, 100.0, 5.0001) == pytest.approx(1.5)

    def test_negative_notional_rejected(self):
        with pytest.raises(ValueError):
            ead_cem(1.0, -100.0, 5.0)


class TestCcrCapital:
    def test_examples(self):
        assert ccr_capital(100.0, 0.20, 0.08) == pytest.approx(1.6)
        assert ccr_capital(0.0, 0.20, 0.08) == 0.0
        assert ccr_capital(100.0, 1.50, 0.08) == pytest.approx(12.0)

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            ccr_capital(-1.0, 0.2, 0.08)


class TestCvaVarCapital:
    def test_matched_hedge_removes_charge(self):
        assert cva_var_capital(100.0, 0.008, 5.0, hedge_notional=100.0, hedge_maturity=5.0) == 0.0

    def test_unhedged_example(self):
        assert cva_var_capital(100.0, 0.008, 5.0) == pytest.approx(9.32)

    def test_zero_weight(self):
        assert cva_var_capital(100.0, 0.0, 5.0) == 0.0


class TestMarketRisk:
    def test_back_to_back_nets_to_zero(self):
        charge = market_risk_capital([(10.0, 100.0), (10.0, -100.0)])
        assert charge == 0.0

    def test_single_position_charged(self):
        assert market_risk_capital([(10.0, 100.0)]) > 0.0

    @given(scale=st.floats(0, 50, **finite))
    def test_positively_homogeneous(self, scale):
        base = market_risk_capital([(10.0, 100.0), (3.0, -40.0)])
        scaled = market_risk_capital([(10.0, scale * 100.0), (3.0, scale * -40.0)])
        assert scaled == pytest.approx(scale * base, rel=1e-12, abs=1e-12)

    def test_different_bands_do_not_net(self):
        assert market_risk_capital([(10.0, 100.0), (1.5, -100.0)]) > 0.0


def _flat_profile(grid, epe, mean=None):
    g = np.asarray(grid, dtype=float)
    e = np.full_like(g, float(epe))
    m = e if mean is None else np.full_like(g, float(mean))
    z = np.zeros_like(g)
    return ExposureProfile(
        grid=g, epe=e, ene=np.minimum(m - e, 0.0), mean_value=m,
        epe_undiscounted=e, mean_value_undiscounted=m,
        se_epe=z, se_ene=z, n_paths=0, seed=0,
    )


class TestCapitalProfile:
    curve = DiscountCurve.flat(0.02)
    swap = SwapSpec(notional=100.0, fixed_rate=0.027, maturity=10.0)
    grid = np.linspace(0.0, 10.0, 41)

    def profile(self, mean=2.0):
        return _flat_profile(self.grid, epe=max(mean, 0.0) + 1.0, mean=mean)

    def test_components_nonnegative_and_relief_bounded(self):
        cap = capital_profile(self.profile(), RATING_TABLE["BB"], self.swap, self.curve,
                              provider=RATING_TABLE["A"])
        assert np.all(cap.k_mr >= 0) and np.all(cap.k_ccr >= 0) and np.all(cap.k_cva >= 0)
        assert np.all(cap.k_relief <= cap.k_unhedged + 1e-15)
        assert np.all(cap.k_relief >= 0)

    def test_full_hedge_removes_cva_component(self):
        cap = capital_profile(self.profile(), RATING_TABLE["BB"], self.swap, self.curve)
        _, _, cva_component = cap.net_components(1.0)
        assert np.all(cva_component == 0.0)

    def test_no_hedge_keeps_everything(self):
        cap = capital_profile(self.profile(), RATING_TABLE["BB"], self.swap, self.curve,
                              provider=RATING_TABLE["A"])
        assert np.array_equal(cap.net_total(0.0), cap.k_unhedged)

    def test_net_total_affine_in_hedge_fraction(self):
        cap = capital_profile(self.profile(), RATING_TABLE["CCC"], self.swap, self.curve,
                              provider=RATING_TABLE["A"])
        mid = cap.net_total(0.5)
        chord = 0.5 * (cap.net_total(0.0) + cap.net_total(1.0))
        assert np.allclose(mid, chord, rtol=1e-14)

    def test_provider_substitution_only_when_better(self):
        prof = self.profile()
        for rating, cpty in RATING_TABLE.items():
            cap = capital_profile(prof, cpty, self.swap, self.curve,
                                  provider=RATING_TABLE["A"])
            _, ccr_unhedged, _ = cap.net_components(0.0)
            _, ccr_hedged, _ = cap.net_components(1.0)
            assert np.all(ccr_unhedged >= ccr_hedged - 1e-15), rating
            expected_weight = min(cpty.risk_weight, RATING_TABLE["A"].risk_weight)
            ratio = expected_weight / cpty.risk_weight
            assert np.allclose(ccr_hedged, ccr_unhedged * ratio, rtol=1e-12)

    def test_zero_book_gives_zero_capital(self):
        prof = _flat_profile(self.grid, epe=0.0, mean=0.0)
        cap = capital_profile(prof, RATING_TABLE["A"], (), self.curve)
        assert np.all(cap.k_unhedged == 0.0)

    def test_capital_vanishes_at_maturity(self):
        cap = capital_profile(self.profile(mean=-3.0), RATING_TABLE["A"], self.swap, self.curve)
        assert cap.k_unhedged[-1] == 0.0

    def test_homogeneous_in_notional(self):
        small = capital_profile(self.profile(), RATING_TABLE["A"], self.swap, self.curve)
        doubled_swap = SwapSpec(notional=200.0, fixed_rate=0.027, maturity=10.0)
        doubled_prof = _flat_profile(self.grid, epe=2 * 3.0, mean=4.0)
        big = capital_profile(doubled_prof, RATING_TABLE["A"], doubled_swap, self.curve)
        assert np.allclose(big.k_unhedged, 2.0 * small.k_unhedged, rtol=1e-12)

    def test_negative_expected_value_leaves_addon_only(self):
        cap_neg = capital_profile(self.profile(mean=-5.0), RATING_TABLE["A"], self.swap, self.curve)
        cap_zero = capital_profile(self.profile(mean=0.0), RATING_TABLE["A"], self.swap, self.curve)
        assert np.array_equal(cap_neg.k_ccr, cap_zero.k_ccr)

    def test_back_to_back_book_has_zero_market_risk(self):
        legs = (
            self.swap,
            SwapSpec(notional=100.0, fixed_rate=0.027, maturity=10.0, payer=False,
                     collateralized=True),
        )
        cap = capital_profile(self.profile(), RATING_TABLE["A"], self.swap, self.curve,
                              mr_swaps=legs)
        assert np.all(cap.k_mr == 0.0)

    def test_unhedged_single_swap_attracts_market_risk(self):
        cap = capital_profile(self.profile(), RATING_TABLE["A"], self.swap, self.curve)
        assert np.all(cap.k_mr[:-1] > 0.0)


def test_remaining_duration_decreases():
    curve = DiscountCurve.flat(0.02)
    swap = SwapSpec(notional=100.0, fixed_rate=0.027, maturity=10.0)
    durations = [remaining_duration(curve, swap, t) for t in (0.0, 3.0, 7.0, 9.8, 10.0)]
    assert durations[0] > durations[1] > durations[2] > durations[3]
    assert durations[-1] == 0.0
    assert durations[0] == pytest.approx(5.2, abs=0.2)


def test_rating_table_contents():
    assert set(RATING_TABLE) == {"AAA", "A", "BB", "CCC"}
    assert RATING_TABLE["BB"].cds_spread == pytest.approx(0.025)
    assert RATING_TABLE["CCC"].risk_weight == pytest.approx(1.5)
    assert RATING_TABLE["AAA"].cva_weight == pytest.approx(0.007)
