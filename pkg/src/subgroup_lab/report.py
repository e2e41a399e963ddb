"""CSV / JSON serialization of scan records."""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

from .harness import ScanRecord

COLUMNS = ("p", "d_gamma", "d_pi", "quantity", "lhs", "bound_expr", "ratio",
           "hypothesis_ok", "params", "seed")


def fmt_float(x: float) -> str:
    return f"{x:.6g}"


def _row(r: ScanRecord) -> list[str]:
    return [
        str(r.p), str(r.d_gamma), str(r.d_pi), r.quantity, str(r.lhs),
        fmt_float(r.bound_expr), fmt_float(r.ratio),
        "true" if r.hypothesis_ok else "false", r.params, str(r.seed),
    ]


def to_csv(records: Iterable[ScanRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in records:
        w.writerow(_row(r))
    return buf.getvalue()


def from_csv(text: str) -> list[ScanRecord]:
    rows = csv.DictReader(io.StringIO(text))
    if tuple(rows.fieldnames or ()) != COLUMNS:
        raise ValueError(f"unexpected header {rows.fieldnames}")
    return [
        ScanRecord(
            int(row["p"]), int(row["d_gamma"]), int(row["d_pi"]), row["quantity"],
            int(row["lhs"]), float(row["bound_expr"]), float(row["ratio"]),
            row["hypothesis_ok"] == "true", row["params"], int(row["seed"]),
        )
        for row in rows
    ]


def to_json(records: Sequence[ScanRecord]) -> str:
    out = []
    for r in records:
        out.append({
            "p": r.p, "d_gamma": r.d_gamma, "d_pi": r.d_pi, "quantity": r.quantity,
            "lhs": r.lhs, "bound_expr": float(fmt_float(r.bound_expr)),
            "ratio": float(fmt_float(r.ratio)), "hypothesis_ok": r.hypothesis_ok,
            "params": r.params, "seed": r.seed,
        })
    return json.dumps(out, indent=1) + "\n"


def render(records: Sequence[ScanRecord], fmt: str) -> str:
    if fmt == "csv":
        return to_csv(records)
    if fmt == "json":
        return to_json(records)
    raise ValueError(f"unknown format {fmt!r}")
