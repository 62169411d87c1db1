#!/usr/bin/env python3
"""Grid-refinement study of the finite-difference verifier.

Solves the toy equity problem on a ladder of grids and reports the error of
the adjustment at the spot against the quadrature decomposition, plus the
observed convergence order between consecutive grids.

Usage: python scripts/pde_convergence.py
"""

import math
import time

from xvakit.pde import Grid, PdeProblem, quadrature_oracle, solve_vhat

PROBLEM = PdeProblem(
    spot=100.0, strike=100.0, maturity=5.0, sigma=0.25, rate=0.02,
    issuer_hazard=0.0167, counterparty_hazard=0.04,
    hedge_fraction=0.25, price_of_risk=0.3,
    capital_funding_fraction=0.5, cost_of_capital=0.10,
    tax_rate=0.21, collateral_spread=0.002, collateral_fraction=0.2,
    capital_factor=0.4, capital_relief_factor=0.25,
)


def main() -> None:
    oracle = quadrature_oracle(PROBLEM)
    print(f"quadrature adjustment: {oracle.total:+.8f}")
    print(f"{'grid':>10}  {'adjustment':>14}  {'abs error':>12}  {'order':>6}  {'time':>7}")
    previous = None
    for n in (50, 100, 200, 400, 800):
        start = time.perf_counter()
        value = solve_vhat(PROBLEM, Grid(n, n)).value_at_spot()
        elapsed = time.perf_counter() - start
        error = abs(value - oracle.total)
        order = f"{math.log2(previous / error):.2f}" if previous else "    -"
        print(f"{n:>6}x{n:<4} {value:>+14.8f}  {error:>12.3e}  {order:>6}  {elapsed:>6.2f}s")
        previous = error


if __name__ == "__main__":
    main()
