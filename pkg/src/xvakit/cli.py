"""Batch command-line front end.

    xva run <config|preset>       price the configured sweep and emit a report
    xva validate <config|preset>  schema/range check only
    xva pde-verify <config|preset> cross-check the PDE solver against quadrature

``<config>`` is a JSON file or one of the built-in presets (base-case,
warehouse-pos, warehouse-neg).  Exit codes: 0 success, 1 validation failure,
2 numerical tolerance breach, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .config import PRESETS, ConfigError, load_config, validate_config
from .pde import Grid, PdeProblem, verify_decomposition
from .report import RENDERERS
from .runner import run_config

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="xva", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a run configuration")
    run.add_argument("config", help="configuration file or preset name")
    run.add_argument("--format", choices=("table", "csv", "json"), default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--paths", type=int, default=None)
    run.add_argument("--out", type=Path, default=None, help="write the report to a file")

    val = sub.add_parser("validate", help="validate a configuration without running")
    val.add_argument("config", help="configuration file or preset name")

    pde = sub.add_parser("pde-verify", help="finite-difference vs quadrature cross-check")
    pde.add_argument("config", help="configuration file or preset name")
    pde.add_argument("--out", type=Path, default=None,
                     help="write the solved surfaces as CSV (t, S, economic, adjustment)")
    return parser


def _load(path: str):
    try:
        return load_config(path), None
    except FileNotFoundError as exc:
        return None, (EXIT_IO, str(exc))
    except ConfigError as exc:
        return None, (EXIT_VALIDATION, "\n".join(exc.diagnostics))


def _cmd_run(args) -> int:
    cfg, err = _load(args.config)
    if err:
        code, message = err
        print(message, file=sys.stderr)
        return code
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.paths is not None:
        if cfg.antithetic and args.paths % 2:
            print("paths: must be even with antithetic sampling", file=sys.stderr)
            return EXIT_VALIDATION
        cfg = replace(cfg, paths=args.paths)
    if args.format is not None:
        cfg = replace(cfg, output_format=args.format)

    result = run_config(cfg)
    text = RENDERERS[cfg.output_format](result)
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_validate(args) -> int:
    if args.config in PRESETS:
        print(f"ok: built-in preset {args.config}")
        return EXIT_OK
    path = Path(args.config)
    if not path.exists():
        print(f"configuration file not found: {path}", file=sys.stderr)
        return EXIT_IO
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        print(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}",
              file=sys.stderr)
        return EXIT_VALIDATION
    cfg, diags = validate_config(raw, base_dir=path.parent)
    if diags:
        for d in diags:
            print(d, file=sys.stderr)
        return EXIT_VALIDATION
    print(f"ok: {path}")
    return EXIT_OK


def _cmd_pde_verify(args) -> int:
    cfg, err = _load(args.config)
    if err:
        code, message = err
        print(message, file=sys.stderr)
        return code
    p = cfg.pde
    problem = PdeProblem(
        spot=p.spot, strike=p.strike, maturity=p.maturity, sigma=p.sigma,
        rate=p.rate, payoff=p.payoff,
        issuer_hazard=p.issuer_hazard, counterparty_hazard=p.counterparty_hazard,
        issuer_recovery=p.issuer_recovery, counterparty_recovery=p.counterparty_recovery,
        hedge_fraction=p.hedge_fraction, price_of_risk=p.price_of_risk,
        capital_funding_fraction=p.capital_funding_fraction,
        cost_of_capital=p.cost_of_capital, tax_rate=p.tax_rate,
        collateral_spread=p.collateral_spread, collateral_fraction=p.collateral_fraction,
        capital_factor=p.capital_factor, capital_relief_factor=p.capital_relief_factor,
        accruals_taxed=p.accruals_taxed,
    )
    grid = Grid(n_space=p.n_space, n_time=p.n_time)
    report = verify_decomposition(problem, grid, tolerance=p.tolerance)
    oracle = report.oracle
    print(f"adjustment  pde {report.pde_adjustment:+.6f}   quadrature {oracle.total:+.6f}   "
          f"rel error {report.rel_error:.3e} (tolerance {report.tolerance:.3e})")
    print(f"components  cva {oracle.cva:+.6f}  dva {oracle.dva:+.6f}  fca {oracle.fca:+.6f}  "
          f"colva {oracle.colva:+.6f}  kva {oracle.kva:+.6f}  tva {oracle.tva:+.6f}")
    print(f"tax effect  pde {report.tax_pde:+.6f}   quadrature {oracle.tva:+.6f}   "
          f"rel error {report.tax_rel_error:.3e}")
    print(f"funding-condition residual (max over nodes): {report.max_funding_residual:.3e}")
    if args.out is not None:
        try:
            _write_surfaces(args.out, problem, grid)
        except OSError as exc:
            print(f"cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_IO
    if not report.passed:
        print("FAIL: discrepancy above tolerance", file=sys.stderr)
        return EXIT_NUMERICAL
    print("PASS")
    return EXIT_OK


def _write_surfaces(path: Path, problem: PdeProblem, grid: Grid) -> None:
    from .pde import solve_vhat

    solution = solve_vhat(problem, grid)
    lines = ["t,S,economic,adjustment"]
    adjustment = solution.adjustment
    for i, t in enumerate(solution.t_nodes):
        for j, s in enumerate(solution.s_nodes):
            lines.append(
                f"{t!r},{s!r},{solution.economic[i, j]!r},{adjustment[i, j]!r}"
            )
    path.write_text("\n".join(lines) + "\n")


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "run":
        return _cmd_run(args)
    if args.command == "validate":
        return _cmd_validate(args)
    return _cmd_pde_verify(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
