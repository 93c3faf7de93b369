import math

import numpy as np
import pytest

from issa import cli, traces
from issa.optimizer import TraceRow


def invoke(argv):
    try:
        return cli.main(argv)
    except SystemExit as exc:
        return exc.code


def sample_rows():
    return [
        TraceRow(iter=0, fx=1.5, grad_norm=0.3, subopt=None, c_used=math.nan,
                 estimator_steps=0, grad_batch=None, quad_regime=False,
                 wall_ms=0.1),
        TraceRow(iter=1, fx=1.25, grad_norm=0.21, subopt=0.75, c_used=9.0,
                 estimator_steps=5, grad_batch=16, quad_regime=True,
                 wall_ms=0.2, hist_warn=True, unstable=False),
    ]


def test_trace_roundtrip_lossless(tmp_path):
    path = tmp_path / "t.csv"
    meta = {"seed": "3", "kind": "ridge"}
    traces.write_trace(path, traces.TraceFile(meta=meta, rows=sample_rows()))
    back = traces.read_trace(path)
    assert back.meta == meta
    assert len(back.rows) == 2
    for a, b in zip(sample_rows(), back.rows):
        assert traces.rows_equal(a, b)


def test_trace_schema_errors(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(traces.TraceSchemaError):
        traces.read_trace(p)
    p.write_text("")
    with pytest.raises(traces.TraceSchemaError):
        traces.read_trace(p)
    p.write_text(",".join(traces.COLUMNS) + "\n1,2\n")
    with pytest.raises(traces.TraceSchemaError):
        traces.read_trace(p)


def test_rows_equal_semantics():
    a, b = sample_rows()
    assert traces.rows_equal(a, a)
    assert not traces.rows_equal(a, b)
    c = TraceRow(**{**a.__dict__})
    c.wall_ms = 99.0
    assert not traces.rows_equal(a, c)
    assert traces.rows_equal(a, c, ignore_wall=True)


def test_cli_generate_run_compare(tmp_path):
    ds = tmp_path / "d.libsvm"
    tr1 = tmp_path / "issa.csv"
    tr2 = tmp_path / "gd.csv"
    out = tmp_path / "summary.csv"
    assert invoke(["generate", "--n", "60", "--d", "5", "--seed", "3",
                   "--out", str(ds)]) == 0
    assert invoke(["run", "--data", str(ds), "--tau", "3", "--iters", "20",
                   "--trace", str(tr1)]) == 0
    assert invoke(["baseline", "--algo", "gd", "--data", str(ds),
                   "--iters", "20", "--trace", str(tr2)]) == 0
    back = traces.read_trace(tr1)
    assert back.meta["kind"] == "ridge"
    assert len(back.rows) == 21
    assert invoke(["compare", "--traces", f"{tr1},{tr2}",
                   "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3


def test_cli_run_synthetic():
    assert invoke(["run", "--synthetic", "40,4,1", "--iters", "10"]) == 0


def test_cli_validate_quick():
    assert invoke(["validate", "--check", "approx-bound", "--alpha", "0.5",
                   "--m", "20", "--d", "6"]) == 0
    assert invoke(["validate", "--check", "first-moment", "--alpha", "0.4",
                   "--m", "15", "--d", "6"]) == 0


def test_cli_usage_errors():
    # Missing subcommand, unknown flag, and conflicting data sources all
    # exit with the usage code.
    assert invoke([]) == cli.EXIT_USAGE
    assert invoke(["run", "--bogus"]) == cli.EXIT_USAGE
    assert invoke(["run"]) == cli.EXIT_USAGE
    assert invoke(["run", "--data", "x", "--synthetic", "1,2,3"]) == cli.EXIT_USAGE
    assert invoke(["run", "--synthetic", "badformat"]) == cli.EXIT_USAGE
    assert invoke(["validate", "--check", "second-moment",
                   "--trials", "10"]) == cli.EXIT_USAGE


def test_cli_io_error_exit_code(tmp_path):
    assert invoke(["run", "--data", str(tmp_path / "missing.libsvm")]) == cli.EXIT_IO
    assert invoke(["compare", "--traces", str(tmp_path / "nope.csv"),
                   "--out", str(tmp_path / "s.csv")]) == cli.EXIT_IO


def test_cli_divergence_exit_code():
    # A microscopic step divisor amplifies every update until the
    # objective overflows; the run must exit with the divergence code.
    assert invoke(["run", "--synthetic", "40,4,1", "--c", "1e-9",
                   "--iters", "50"]) == cli.EXIT_DIVERGED
