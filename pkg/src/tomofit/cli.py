"""``tomofit`` command line: batch reconstruction of single-qubit states.

Each input record is turned into a Stokes vector and then, depending on
``--method``:

auto     physical data pass straight through, unphysical data go to MLE
mle      always refine in T space from the analytic seed
project  radially project onto the Bloch ball
raw      emit the measured matrix untouched (may be unphysical)

Exit status is 0 on success, 2 on any input error and 1 if the optimizer
aborts. Output goes to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .core import density_from_stokes, eigenvalues, is_physical, purity, stokes_from_density
from .errors import InvalidInputError, OptimizerAbort, RecordError
from .ingest import CountRecord, parse_records, sniff_format, stokes_from_record
from .mle import COST_KINDS, EXACT_PASSTHROUGH, NAIVE_SEED, FitOptions, FitResult, fit
from .projection import fit_by_projection
from .tmatrix import DEFAULT_EPSILON

METHODS = ("auto", "mle", "project", "raw")
RAW = "raw"

EXIT_OK = 0
EXIT_ABORT = 1
EXIT_INPUT = 2


@dataclass(frozen=True)
class RunConfig:
    input_path: str
    format: str = "auto"
    method: str = "auto"
    cost: str = "stokes_lsq"
    epsilon: float = DEFAULT_EPSILON
    tol: float = 0.0
    output: str = "json"
    compare_seeds: bool = False

    def __post_init__(self):
        if not 0.0 <= self.epsilon < 1.0:
            raise InvalidInputError("--epsilon must lie in [0, 1)")
        if not self.tol >= 0.0:
            raise InvalidInputError("--tol must be non-negative")


def fit_options(cost: str, environ=os.environ) -> FitOptions:
    max_iter = environ.get("TOMOFIT_MAX_ITER")
    if max_iter:
        try:
            return FitOptions(cost_kind=cost, max_iterations=int(max_iter))
        except ValueError:
            raise InvalidInputError(f"TOMOFIT_MAX_ITER={max_iter!r} is not a positive integer") from None
    return FitOptions(cost_kind=cost)


def _stokes(s) -> dict:
    return {"s1": s.s1, "s2": s.s2, "s3": s.s3}


def process_record(rec, config: RunConfig, opts: FitOptions) -> dict:
    """Reconstruct one record and return its output fields in emission order."""
    s = stokes_from_record(rec)
    physical = is_physical(s, config.tol)
    if config.cost == "count_likelihood" and config.method in ("auto", "mle") and not isinstance(rec, CountRecord):
        raise InvalidInputError("cost count_likelihood needs 4-count records (n_h, n_v, n_d, n_r)")

    count_rec = rec if isinstance(rec, CountRecord) else None
    if config.method == "project":
        result = fit_by_projection(s)
    elif config.method == RAW:
        result = FitResult(None, density_from_stokes(s), 0.0, 0, True, RAW)
    else:
        result = fit(s, count_rec, opts, config.epsilon, tol=config.tol, force=config.method == "mle")

    rho = result.rho
    out = {
        "label": rec.label,
        "s_measured": _stokes(s),
        "physical_input": physical,
        "method_used": result.method,
        "rho": {"r00": rho.r00, "r11": rho.r11, "r01": {"re": rho.r01_re, "im": rho.r01_im}, "raw": rho.raw},
        "s_fitted": _stokes(stokes_from_density(rho)),
        "eigenvalues": list(eigenvalues(rho)),
        "purity": purity(rho),
        "cost": result.cost,
        "seed": None,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    if result.seed is not None:
        seed = result.seed
        out["seed"] = {"t": list(seed.t.as_tuple()), "clamped": seed.clamped, "branch": seed.branch}
    if config.compare_seeds:
        naive = None
        if result.method not in (EXACT_PASSTHROUGH, "projection", RAW):
            naive = fit(s, count_rec, opts, config.epsilon, force=True, start=NAIVE_SEED).iterations
        out["iterations_analytic_seed"] = result.iterations if naive is not None else None
        out["iterations_naive_seed"] = naive
    return out


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        return "null"
    return format(x + 0.0, ".17g")  # + 0.0 folds -0.0 into 0.0


def to_json(value, indent: int = 0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = "  " * (indent + 1)
    end = "  " * indent
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt_float(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{to_json(str(k))}: {to_json(v, indent + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            return "[" + ", ".join(to_json(v) for v in value) + "]"
        items = [pad + to_json(v, indent + 1) for v in value]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _flatten(prefix: str, value, out: dict):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}_{k}" if prefix else k, v, out)
    elif isinstance(value, (list, tuple)):
        for i, v in enumerate(value):
            _flatten(f"{prefix}_{i}", v, out)
    else:
        out[prefix] = value


def to_csv(rows: list[dict]) -> str:
    flat = []
    for row in rows:
        f = {}
        _flatten("", row, f)
        flat.append(f)
    columns: list[str] = []
    for f in flat:
        for k in f:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for f in flat:
        cells = []
        for col in columns:
            v = f.get(col)
            if v is None:
                cells.append("")
            elif isinstance(v, bool):
                cells.append("true" if v else "false")
            elif isinstance(v, float):
                cells.append(_fmt_float(v))
            else:
                cells.append(str(v))
        writer.writerow(cells)
    return buf.getvalue()


def _read_input(config: RunConfig, stdin) -> tuple[bytes, str]:
    if config.input_path == "-":
        data = stdin.buffer.read() if hasattr(stdin, "buffer") else stdin.read()
        if isinstance(data, str):
            data = data.encode("utf-8")
    else:
        data = Path(config.input_path).read_bytes()
    fmt = config.format
    if fmt == "auto":
        suffix = Path(config.input_path).suffix.lower()
        fmt = suffix[1:] if suffix in (".csv", ".json") else sniff_format(data)
    return data, fmt


def run(config: RunConfig, stdout=None, stderr=None, stdin=None, environ=None) -> int:
    """Process every record of ``config.input_path``; returns the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    stdin = stdin or sys.stdin
    environ = os.environ if environ is None else environ

    def fail(status: int, message: str) -> int:
        print(f"tomofit: error: {message}", file=stderr)
        return status

    try:
        opts = fit_options(config.cost, environ)
        data, fmt = _read_input(config, stdin)
        records = parse_records(data, fmt)
    except OSError as exc:
        return fail(EXIT_INPUT, f"cannot read {config.input_path}: {exc.strerror or exc}")
    except (RecordError, InvalidInputError) as exc:
        return fail(EXIT_INPUT, str(exc))

    rows = []
    for index, rec in enumerate(records):
        try:
            rows.append(process_record(rec, config, opts))
        except OptimizerAbort as exc:
            return fail(EXIT_ABORT, f"record {index}: optimizer aborted: {exc}")
        except InvalidInputError as exc:
            return fail(EXIT_INPUT, f"record {index}: {exc}")

    if config.output == "csv":
        stdout.write(to_csv(rows))
    else:
        stdout.write(to_json(rows) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="tomofit",
        description="Reconstruct physical single-qubit density matrices from polarization measurements.",
    )
    p.add_argument("--input", required=True, help="CSV or JSON measurement file, or - for stdin")
    p.add_argument("--format", choices=("csv", "json", "auto"), default="auto")
    p.add_argument("--method", choices=METHODS, default="auto")
    p.add_argument("--cost", choices=COST_KINDS, default="stokes_lsq")
    p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON,
                   help="near-|0> threshold: s3 >= 1 - epsilon seeds with t2 = 0 (default %(default)s)")
    p.add_argument("--tol", type=float, default=0.0,
                   help="treat |s|^2 <= 1 + tol as physical (default %(default)s)")
    p.add_argument("--output", choices=("json", "csv"), default="json")
    p.add_argument("--compare-seeds", action="store_true",
                   help="also fit MLE records from (1,1,1,1) and report both iteration counts")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            input_path=args.input,
            format=args.format,
            method=args.method,
            cost=args.cost,
            epsilon=args.epsilon,
            tol=args.tol,
            output=args.output,
            compare_seeds=args.compare_seeds,
        )
    except InvalidInputError as exc:
        print(f"tomofit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
