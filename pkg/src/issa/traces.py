"""Trace persistence: a small CSV dialect with a metadata header.

Lines starting with ``#`` hold ``key=value`` run metadata (config echo,
seed, scaling constants).  The column order is fixed; numeric fields are
written with 17 significant digits so write-then-read is lossless.
Absent values are written as ``NA``.
"""

import csv
import math
from dataclasses import dataclass

from .optimizer import TraceRow

COLUMNS = (
    "iter",
    "fx",
    "grad_norm",
    "subopt",
    "c_used",
    "estimator_steps",
    "grad_batch",
    "quad_regime",
    "wall_ms",
    "hist_warn",
    "unstable",
)


class TraceSchemaError(ValueError):
    """The file's column header does not match the documented schema."""


@dataclass
class TraceFile:
    """Header metadata plus the per-iteration rows."""

    meta: dict
    rows: list


def _fmt_float(v):
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "NA"
    return f"{float(v):.17g}"


def _fmt_int(v):
    return "NA" if v is None else str(int(v))


def _fmt_bool(v):
    return "1" if v else "0"


def write_trace(path, trace):
    with open(path, "w", newline="") as fh:
        for key in sorted(trace.meta):
            fh.write(f"# {key}={trace.meta[key]}\n")
        writer = csv.writer(fh)
        writer.writerow(COLUMNS)
        for r in trace.rows:
            writer.writerow(
                [
                    _fmt_int(r.iter),
                    _fmt_float(r.fx),
                    _fmt_float(r.grad_norm),
                    _fmt_float(r.subopt),
                    _fmt_float(r.c_used),
                    _fmt_int(r.estimator_steps),
                    _fmt_int(r.grad_batch),
                    _fmt_bool(r.quad_regime),
                    _fmt_float(r.wall_ms),
                    _fmt_bool(r.hist_warn),
                    _fmt_bool(r.unstable),
                ]
            )


def _parse_float(tok, allow_na=True):
    if tok == "NA":
        if allow_na:
            return None
        return math.nan
    return float(tok)


def read_trace(path):
    meta = {}
    rows = []
    with open(path, newline="") as fh:
        lines = []
        for line in fh:
            if line.startswith("#"):
                body = line[1:].strip()
                key, _, value = body.partition("=")
                meta[key.strip()] = value
            else:
                lines.append(line)
    reader = csv.reader(lines)
    try:
        header = tuple(next(reader))
    except StopIteration:
        raise TraceSchemaError("missing column header") from None
    if header != COLUMNS:
        raise TraceSchemaError(f"unexpected columns {header!r}")
    for rec in reader:
        if not rec:
            continue
        if len(rec) != len(COLUMNS):
            raise TraceSchemaError(f"row has {len(rec)} fields, expected {len(COLUMNS)}")
        rows.append(
            TraceRow(
                iter=int(rec[0]),
                fx=float(rec[1]),
                grad_norm=float(rec[2]),
                subopt=_parse_float(rec[3]),
                c_used=math.nan if rec[4] == "NA" else float(rec[4]),
                estimator_steps=int(rec[5]),
                grad_batch=None if rec[6] == "NA" else int(rec[6]),
                quad_regime=rec[7] == "1",
                wall_ms=float(rec[8]),
                hist_warn=rec[9] == "1",
                unstable=rec[10] == "1",
            )
        )
    return TraceFile(meta=meta, rows=rows)


def rows_equal(a, b, ignore_wall=False):
    """Field-by-field row comparison; NaN compares equal to NaN."""

    def eq(u, v):
        if isinstance(u, float) and isinstance(v, float):
            if math.isnan(u) and math.isnan(v):
                return True
        return u == v

    fields = [f for f in COLUMNS if not (ignore_wall and f == "wall_ms")]
    return all(eq(getattr(a, f), getattr(b, f)) for f in fields)
