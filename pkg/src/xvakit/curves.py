"""Discount-curve primitives.

Conventions used throughout the package:

- times are year fractions measured from the valuation date (t = 0),
- zero rates are continuously compounded,
- the log discount factor is interpolated linearly between pillars
  (equivalently: instantaneous forwards are piecewise constant), so the
  curve reproduces its pillar quotes exactly and df(0) == 1,
- beyond the last pillar the zero rate is extrapolated flat.

Curves are plain dataclasses; treat them as immutable after construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def _scalar_or_array(t, values):
    if np.isscalar(t) or np.ndim(t) == 0:
        return float(values)
    return values


@dataclass
class DiscountCurve:
    """Zero curve with log-linear discount-factor interpolation.

    ``pillars[i]`` is a year fraction (> 0, strictly increasing) and
    ``zero_rates[i]`` the continuously compounded zero rate quoted there.
    """

    pillars: tuple[float, ...]
    zero_rates: tuple[float, ...]
    _knots: np.ndarray = field(init=False, repr=False)
    _log_dfs: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.pillars = tuple(float(p) for p in self.pillars)
        self.zero_rates = tuple(float(r) for r in self.zero_rates)
        if len(self.pillars) != len(self.zero_rates):
            raise ValueError("pillars and zero_rates must have the same length")
        if not self.pillars:
            raise ValueError("curve needs at least one pillar")
        if self.pillars[0] <= 0.0:
            raise ValueError("first pillar must be > 0")
        for a, b in zip(self.pillars, self.pillars[1:]):
            if b <= a:
                raise ValueError("pillars must be strictly increasing")
        if not all(np.isfinite(self.zero_rates)):
            raise ValueError("zero rates must be finite")
        # Interpolation knots include t=0 with log df 0, so df(0) == 1 exactly.
        self._knots = np.concatenate([[0.0], np.asarray(self.pillars)])
        self._log_dfs = np.concatenate(
            [[0.0], -np.asarray(self.zero_rates) * np.asarray(self.pillars)]
        )

    @classmethod
    def flat(cls, rate: float, horizon: float = 50.0) -> "DiscountCurve":
        return cls((horizon,), (rate,))

    def log_df(self, t):
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("time must be >= 0")
        inside = np.interp(t_arr, self._knots, self._log_dfs)
        # Flat zero-rate extrapolation beyond the last pillar.
        out = np.where(t_arr > self.pillars[-1], -self.zero_rates[-1] * t_arr, inside)
        return _scalar_or_array(t, out)

    def df(self, t):
        """Discount factor exp(-r(t) * t)."""
        return np.exp(self.log_df(t))

    def zero_rate(self, t):
        t_arr = np.asarray(t, dtype=float)
        ld = np.asarray(self.log_df(t_arr))
        with np.errstate(divide="ignore", invalid="ignore"):
            r = np.where(t_arr > 0, -ld / np.where(t_arr > 0, t_arr, 1.0), self.forward(0.0))
        return _scalar_or_array(t, r)

    def forward(self, t):
        """Instantaneous forward rate; piecewise constant between pillars.

        On each segment (knot[i-1], knot[i]] the forward is the slope of the
        log discount factor; the value is flat beyond the last pillar.
        """
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr < 0):
            raise ValueError("time must be >= 0")
        seg_fwd = -np.diff(self._log_dfs) / np.diff(self._knots)
        idx = np.searchsorted(self._knots, t_arr, side="left")
        idx = np.clip(idx - 1, 0, len(seg_fwd) - 1)
        out = np.where(t_arr > self.pillars[-1], self.zero_rates[-1], seg_fwd[idx])
        return _scalar_or_array(t, out)
