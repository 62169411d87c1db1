"""Rendering of run results as a text table, CSV or JSON.

The text table rounds adjustment values to whole basis points (half away
from zero); its Total column is the rounded sum of the unrounded components,
so it can differ from the sum of the rounded cells.  CSV and JSON carry the
unrounded values together with the Monte Carlo standard-error bound, and are
byte-stable for a given configuration and seed.
"""

from __future__ import annotations

import json
import math

from .runner import ReportRow, RunResult

_COMPONENTS = ("cva", "dva", "fca", "colva", "kva_mr", "kva_ccr", "kva_cva", "tva")


def round_half_away(x: float) -> int:
    """Round to the nearest integer with ties away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))


def _row_record(row: ReportRow) -> dict:
    bps = row.result.as_bps()
    record = {
        "source": row.source,
        "psi": row.hedge_fraction,
        "mLambdaC": row.m_lambda if row.m_lambda is not None else row.price_of_risk,
        "phi": row.capital_funding_fraction,
        "rating": row.rating,
    }
    for name in _COMPONENTS:
        record[f"{name}_bp"] = bps[name]
    record["total_bp"] = bps["total"]
    record["se_bp"] = row.se_bp
    record["warn"] = row.warn
    return record


_COLUMN_TITLES = {
    "cva": "CVA", "dva": "DVA", "fca": "FCA", "colva": "COLVA",
    "kva_mr": "KVA_MR", "kva_ccr": "KVA_CCR", "kva_cva": "KVA_CVA", "tva": "TVA",
}


def render_table(result: RunResult) -> str:
    # The collateral column only appears when it carries anything.
    show_colva = any(abs(r.result.bps(r.result.colva)) >= 0.005 for r in result.rows)
    shown = tuple(c for c in _COMPONENTS if show_colva or c != "colva")
    headers = (
        ("Source", "psi", "m_lamC", "phi", "Rating")
        + tuple(_COLUMN_TITLES[c] for c in shown)
        + ("Total", "")
    )
    lines = []
    body = []
    for row in result.rows:
        bps = row.result.as_bps()
        cells = [
            row.source,
            f"{row.hedge_fraction:g}",
            row.price_of_risk_label,
            f"{row.capital_funding_fraction:g}",
            row.rating,
        ]
        cells += [str(round_half_away(bps[name])) for name in shown]
        cells.append(str(round_half_away(bps["total"])))
        cells.append("!" if row.warn else "")
        body.append(cells)
    widths = [max(len(h), *(len(r[i]) for r in body)) if body else len(h)
              for i, h in enumerate(headers)]
    lines.append("  ".join(h.rjust(w) for h, w in zip(headers, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths).rstrip())
    for cells in body:
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip())
    lines.append("")
    lines.append(
        f"values in bps of notional {result.rows[0].result.notional:g}; "
        f"{result.profile.n_paths} paths, seed {result.config.seed}"
        if result.rows
        else "no rows"
    )
    return "\n".join(lines) + "\n"


def render_csv(result: RunResult) -> str:
    fields = (
        ["source", "psi", "mLambdaC", "phi", "rating"]
        + [f"{name}_bp" for name in _COMPONENTS]
        + ["total_bp", "se_bp", "warn"]
    )
    lines = [",".join(fields)]
    for row in result.rows:
        record = _row_record(row)
        cells = []
        for f in fields:
            v = record[f]
            if isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(repr(float(v)))
            else:
                cells.append(str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def render_json(result: RunResult) -> str:
    payload = {
        "schemaVersion": 1,
        "seed": result.config.seed,
        "paths": result.profile.n_paths,
        "notional": result.rows[0].result.notional if result.rows else None,
        "rows": [],
    }
    for row in result.rows:
        record = _row_record(row)
        record["currency"] = {
            name: getattr(row.result, name) for name in _COMPONENTS
        }
        record["currency"]["total"] = row.result.total
        payload["rows"].append(record)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


RENDERERS = {"table": render_table, "csv": render_csv, "json": render_json}
