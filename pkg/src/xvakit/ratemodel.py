"""One-factor mean-reverting Gaussian short-rate model.

The short rate is ``r(t) = x(t) + alpha(t)`` where ``x`` is an
Ornstein-Uhlenbeck factor, ``dx = -a x dt + sigma dW``, ``x(0) = 0``, and
``alpha`` is the deterministic shift that fits the initial discount curve
exactly.  This is the minimal model with closed-form zero-coupon bonds,

    P(t, T) = P(0, T) / P(0, t) * exp(-x(t) B(t, T) - c(t, T)),

with ``B(t, T) = (1 - exp(-a (T-t))) / a`` and a deterministic convexity
term ``c``; see ``bond_price``.  Simulation is exact: per step the pair
(factor increment, integrated factor) is drawn from its joint Gaussian law,
so pathwise discount factors are unbiased at any step size and their mean
reproduces the input curve in expectation.

Determinism: paths are generated in fixed-size blocks, block ``b`` seeded
from ``SeedSequence(seed, spawn_key=(b,))``.  Results are therefore
bit-identical for a given (seed, n_paths, antithetic) regardless of how many
workers execute the blocks.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curves import DiscountCurve

BLOCK_SIZE = 8192  # paths per deterministic substream; even, so antithetic pairs fit


@dataclass(frozen=True)
class ShortRateModel:
    """Model parameters: mean-reversion speed (1/years) and absolute volatility.

    With ``fit_to_curve`` (the default) the drift reproduces today's discount
    curve; otherwise the curve is collapsed to its instantaneous short rate,
    which is only useful as a diagnostic mode.
    """

    mean_reversion: float
    sigma: float
    fit_to_curve: bool = True

    def __post_init__(self):
        if not self.mean_reversion > 0:
            raise ValueError("mean_reversion must be > 0")
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")

    # -- deterministic helpers -------------------------------------------------

    def b_factor(self, dt):
        a = self.mean_reversion
        return (1.0 - np.exp(-a * np.asarray(dt, dtype=float))) / a

    def _log_df0(self, curve: DiscountCurve, t):
        if self.fit_to_curve:
            return curve.log_df(t)
        return -curve.forward(0.0) * np.asarray(t, dtype=float)

    def _convexity(self, t, dt):
        """Deterministic part of the bond-price exponent at time t, tenor dt."""
        a, s = self.mean_reversion, self.sigma
        b = self.b_factor(dt)
        one_m = 1.0 - np.exp(-a * np.asarray(t, dtype=float))
        one_m2 = 1.0 - np.exp(-2.0 * a * np.asarray(t, dtype=float))
        return s * s * (b * b * one_m2 / (4.0 * a) + b * one_m * one_m / (2.0 * a * a))

    def _integrated_shift(self, curve: DiscountCurve, t):
        """Integral of alpha over [0, t]; makes E[pathwise df] match the curve."""
        a, s = self.mean_reversion, self.sigma
        t_arr = np.asarray(t, dtype=float)
        b = self.b_factor(t_arr)
        v_int = (t_arr - 2.0 * b + (1.0 - np.exp(-2.0 * a * t_arr)) / (2.0 * a)) / (a * a)
        return -self._log_df0(curve, t_arr) + 0.5 * s * s * v_int

    def shift(self, curve: DiscountCurve, t):
        """alpha(t): short-rate level around which the factor fluctuates."""
        a, s = self.mean_reversion, self.sigma
        one_m = 1.0 - np.exp(-a * np.asarray(t, dtype=float))
        base = curve.forward(t) if self.fit_to_curve else curve.forward(0.0)
        return base + s * s * one_m * one_m / (2.0 * a * a)

    def bond_price(self, curve: DiscountCurve, t, maturity, x):
        """Zero-coupon bond P(t, maturity) given the factor value(s) x at t."""
        dt = np.asarray(maturity, dtype=float) - t
        if np.any(dt < -1e-12):
            raise ValueError("bond maturity before observation time")
        dt = np.maximum(dt, 0.0)
        b = self.b_factor(dt)
        log_ratio = self._log_df0(curve, maturity) - self._log_df0(curve, t)
        return np.exp(log_ratio - np.multiply.outer(np.asarray(x, dtype=float), b)
                      - self._convexity(t, dt))

    def step_moments(self, dt: float) -> tuple[float, float, float, float]:
        """(decay, var_x, cov_xy, var_y) of (x(t+dt), int_t^{t+dt} x ds) given x(t)."""
        a, s = self.mean_reversion, self.sigma
        e1 = np.exp(-a * dt)
        e2 = np.exp(-2.0 * a * dt)
        b = (1.0 - e1) / a
        var_x = s * s * (1.0 - e2) / (2.0 * a)
        cov = s * s / (a * a) * ((1.0 - e1) - 0.5 * (1.0 - e2))
        var_y = s * s / (a * a) * (dt - 2.0 * b + (1.0 - e2) / (2.0 * a))
        return e1, var_x, cov, var_y


@dataclass
class PathSet:
    """Simulated factor paths with their pathwise discount factors.

    ``factor[p, k]`` is x at ``grid[k]`` on path p, ``short_rate`` the full
    rate x + alpha, and ``discount[p, k]`` is exp(-integral of r over
    [0, grid[k]]) accumulated along the path.
    """

    grid: np.ndarray
    factor: np.ndarray
    short_rate: np.ndarray
    discount: np.ndarray
    seed: int
    antithetic: bool

    @property
    def n_paths(self) -> int:
        return self.factor.shape[0]


def _validate_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or len(g) < 2:
        raise ValueError("grid must be a 1-d array with at least two points")
    if g[0] != 0.0:
        raise ValueError("grid must start at 0")
    if np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly increasing")
    return g


def _block_sizes(n_paths: int) -> list[int]:
    sizes = [BLOCK_SIZE] * (n_paths // BLOCK_SIZE)
    if n_paths % BLOCK_SIZE:
        sizes.append(n_paths % BLOCK_SIZE)
    return sizes


def _simulate_block(
    model: ShortRateModel, grid: np.ndarray, n_block: int, seed: int, block_index: int,
    antithetic: bool,
) -> tuple[np.ndarray, np.ndarray]:
    """Factor paths and integrated factor for one deterministic block."""
    rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block_index,)))
    n_steps = len(grid) - 1
    n_draw = n_block // 2 if antithetic else n_block
    z = rng.standard_normal((n_draw, n_steps, 2))
    if antithetic:
        z = np.concatenate([z, -z], axis=0)

    x = np.zeros((n_block, len(grid)))
    y = np.zeros((n_block, len(grid)))  # integrated factor
    for k in range(n_steps):
        dt = grid[k + 1] - grid[k]
        decay, var_x, cov, var_y = model.step_moments(dt)
        l11 = np.sqrt(var_x)
        l21 = cov / l11 if l11 > 0 else 0.0
        l22 = np.sqrt(max(var_y - l21 * l21, 0.0))
        b = float(model.b_factor(dt))
        x[:, k + 1] = x[:, k] * decay + l11 * z[:, k, 0]
        y[:, k + 1] = y[:, k] + x[:, k] * b + l21 * z[:, k, 0] + l22 * z[:, k, 1]
    return x, y


def simulate_paths(
    model: ShortRateModel,
    curve: DiscountCurve,
    grid,
    n_paths: int,
    seed: int,
    antithetic: bool = True,
    n_workers: int = 1,
) -> PathSet:
    """Simulate factor paths and pathwise discount factors on the given grid."""
    g = _validate_grid(grid)
    if n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    if antithetic and n_paths % 2:
        raise ValueError("antithetic sampling needs an even path count")

    sizes = _block_sizes(n_paths)

    def run(idx_size):
        idx, size = idx_size
        return _simulate_block(model, g, size, seed, idx, antithetic)

    jobs = list(enumerate(sizes))
    if n_workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            parts = list(pool.map(run, jobs))
    else:
        parts = [run(j) for j in jobs]

    x = np.concatenate([p[0] for p in parts], axis=0)
    y = np.concatenate([p[1] for p in parts], axis=0)
    int_shift = np.asarray(model._integrated_shift(curve, g))
    discount = np.exp(-(int_shift[None, :] + y))
    short_rate = x + np.asarray(model.shift(curve, g))[None, :]
    return PathSet(grid=g, factor=x, short_rate=short_rate, discount=discount,
                   seed=seed, antithetic=antithetic)
