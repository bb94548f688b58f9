"""Command-line surface.

Subcommands: measure, if-curve, variance, verify, mc-study, compare-ge.
Distributions are given with the mini-grammar kind:param[,param...]
("exp:1", "pareto:3,1", "lognormal:0,0.5", "uniform:0,1", "sm:2,1,3"),
income files as one-value-per-row CSV. Reports are CSV (fixed 6-decimal
summary columns) or JSON (full-precision values) and always carry the
schema version, registry version and seed. Exit codes: 0 ok, 1 usage
error, 2 numeric failure, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .distributions import Distribution, make_distribution
from .errors import (
    DegenerateDenominator,
    DomainError,
    EmptyInput,
    IneqError,
    InvalidInterval,
    InvalidParameter,
    KinkPoint,
    MomentDiverges,
    NegativeIncome,
    NoisyLimit,
    NonConvergence,
    ParseError,
)
from .estimation import RngStream, mc_variance_study
from .influence import (
    asymptotic_variance,
    default_grid,
    gateaux_if,
    ge_if_with_coefficient,
    ge_if_without_coefficient,
    if_curve,
    if_special,
    printed_variants,
)
from .measures import (
    DEFAULT_MEASURE_IDS,
    REGISTRY_VERSION,
    Sample,
    gini_plugin,
    parse_measure_id,
    plugin_estimate,
    qsr_plugin,
)
from .numeric import DEFAULT_TOL, Tolerance

SCHEMA_VERSION = "1"
DEFAULT_SEED = 42

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2
EXIT_VERIFY = 3

_NUMERIC_FAILURES = (
    NonConvergence,
    MomentDiverges,
    DegenerateDenominator,
    DomainError,
    KinkPoint,
    NoisyLimit,
    InvalidInterval,
)
_USAGE_FAILURES = (InvalidParameter, ParseError, EmptyInput, NegativeIncome)

# Relative slack applied on top of the absolute verification tolerance.
VERIFY_REL_SLACK = 1e-4


# ---------------------------------------------------------------------------
# Input parsing
# ---------------------------------------------------------------------------


def ingest_csv(path: str) -> Sample:
    """Read one income per row; optional single 'income' header row.

    Blank lines are ignored; bad rows raise ParseError/NegativeIncome with
    their 1-based physical row number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.readlines()
    values = []
    seen_content = False
    for row_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if not seen_content and line.lower() == "income":
            seen_content = True
            continue
        seen_content = True
        try:
            value = float(line)
        except ValueError:
            raise ParseError(row_no, line) from None
        if math.isnan(value) or math.isinf(value):
            raise ParseError(row_no, line)
        if value < 0:
            raise NegativeIncome(row_no, value)
        values.append(value)
    if not values:
        raise EmptyInput(f"no data rows in {path}")
    return Sample.from_values(values)


def parse_distribution(spec: str) -> Distribution:
    """Parse the kind:param[,param...] mini-grammar."""
    name, _, rest = str(spec).partition(":")
    if not name:
        raise InvalidParameter(f"empty distribution spec {spec!r}")
    try:
        params = [float(tok) for tok in rest.split(",")] if rest else []
    except ValueError:
        raise InvalidParameter(f"bad parameter list in {spec!r}") from None
    return make_distribution(name, *params)


def parse_grid(spec: str) -> np.ndarray:
    """Parse min:max:count:log|lin into a grid of z values."""
    parts = str(spec).split(":")
    if len(parts) != 4:
        raise InvalidParameter(
            f"grid spec must be min:max:count:log|lin, got {spec!r}"
        )
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise InvalidParameter(f"bad grid numbers in {spec!r}") from None
    spacing = parts[3].lower()
    if count < 1:
        raise InvalidParameter(f"grid count must be >= 1, got {count}")
    if not lo < hi and count > 1:
        raise InvalidParameter(f"grid needs min < max, got {spec!r}")
    if spacing == "lin":
        return np.linspace(lo, hi, count)
    if spacing == "log":
        if lo <= 0:
            raise InvalidParameter("log grid needs min > 0")
        return np.geomspace(lo, hi, count)
    raise InvalidParameter(f"grid spacing must be log or lin, got {spacing!r}")


def _expand_ids(raw: Optional[str], single: Optional[str]) -> list[str]:
    token = raw if raw is not None else single
    if token is None:
        raise InvalidParameter("a measure id is required (--id/--ids)")
    token = token.strip()
    if token.lower() == "all":
        return list(DEFAULT_MEASURE_IDS)
    ids = [t.strip() for t in token.split(",") if t.strip()]
    if not ids:
        raise InvalidParameter("empty measure id list")
    return [parse_measure_id(t).id for t in ids]


@dataclass(frozen=True)
class RunConfig:
    """Validated run description shared by the subcommand handlers."""

    command: str
    measure_ids: tuple
    dist: Optional[str]
    input_path: Optional[str]
    grid: Optional[str]
    tol: Tolerance
    seed: int
    out: Optional[str]
    fmt: str

    def __post_init__(self):
        if self.command == "measure":
            if (self.dist is None) == (self.input_path is None):
                raise InvalidParameter(
                    "exactly one of --dist or --input must be given"
                )
        elif self.command in ("if-curve", "variance", "verify", "mc-study",
                              "compare-ge"):
            if self.dist is None:
                raise InvalidParameter(f"{self.command} requires --dist")

    def distribution(self) -> Distribution:
        return parse_distribution(self.dist)


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value).lower()
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return f"{value:.6f}"
    return str(value)


def _json_safe(value):
    if isinstance(value, float) and (math.isnan(value) or math.isinf(value)):
        return None
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    return value


def render_csv(columns: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(row.get(col)) for col in columns])
    return buf.getvalue()


def render_json(payload: dict) -> str:
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [clean(v) for v in obj]
        return _json_safe(obj)

    return json.dumps(clean(payload), indent=2) + "\n"


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".ineqif-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: RunConfig, payload: dict, columns, rows) -> None:
    if cfg.fmt == "json":
        text = render_json(payload)
    else:
        text = render_csv(columns, rows)
    if cfg.out:
        _atomic_write(cfg.out, text)
    else:
        sys.stdout.write(text)


def _payload(cfg: RunConfig, **extra) -> dict:
    base = {
        "schema_version": SCHEMA_VERSION,
        "registry_version": REGISTRY_VERSION,
        "command": cfg.command,
        "seed": cfg.seed,
    }
    base.update(extra)
    return base


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_measure(cfg: RunConfig) -> int:
    rows = []
    if cfg.input_path is not None:
        sample = ingest_csv(cfg.input_path)
        source = {"input": cfg.input_path, "n": sample.n}
        for mid in cfg.measure_ids:
            T = parse_measure_id(mid)
            if T.kind == "gini":
                value = gini_plugin(sample, cfg.tol)
            elif T.kind == "qsr":
                value = qsr_plugin(sample, cfg.tol)
            else:
                value = plugin_estimate(T.spec, sample)
            rows.append({"measure_id": T.id, "value": value})
    else:
        F = cfg.distribution()
        source = {"distribution": F.descriptor()}
        for mid in cfg.measure_ids:
            T = parse_measure_id(mid)
            rows.append({"measure_id": T.id, "value": T.evaluate(F, cfg.tol)})
    payload = _payload(cfg, **source, results=rows)
    _emit(cfg, payload, ["measure_id", "value"], rows)
    return EXIT_OK


def _cmd_if_curve(cfg: RunConfig, with_oracle: bool) -> int:
    F = cfg.distribution()
    mid = cfg.measure_ids[0]
    grid = parse_grid(cfg.grid) if cfg.grid else default_grid(F, mid)
    curve = if_curve(mid, F, grid, with_oracle=with_oracle, tol=cfg.tol)
    rows = []
    for i, z in enumerate(curve.grid):
        closed = float(curve.closed_form[i])
        oracle = float(curve.oracle[i]) if curve.oracle is not None else None
        abs_err = None
        if oracle is not None and math.isfinite(oracle) and math.isfinite(closed):
            abs_err = abs(closed - oracle)
        rows.append({
            "z": float(z),
            "if_closed": closed if math.isfinite(closed) else None,
            "if_oracle": oracle if oracle is not None and math.isfinite(oracle) else None,
            "abs_err": abs_err,
        })
    payload = _payload(
        cfg,
        measure_id=curve.measure_id,
        distribution=curve.distribution,
        max_abs_discrepancy=curve.max_abs_discrepancy,
        point_errors=[{"index": i, "message": m} for i, m in curve.point_errors],
        rows=rows,
    )
    _emit(cfg, payload, ["z", "if_closed", "if_oracle", "abs_err"], rows)
    return EXIT_OK


def _cmd_variance(cfg: RunConfig) -> int:
    F = cfg.distribution()
    rows = []
    for mid in cfg.measure_ids:
        T = parse_measure_id(mid)
        rows.append({"measure_id": T.id,
                     "sigma2": asymptotic_variance(T, F, cfg.tol)})
    payload = _payload(cfg, distribution=F.descriptor(), results=rows)
    _emit(cfg, payload, ["measure_id", "sigma2"], rows)
    return EXIT_OK


def _verify_tolerance(abs_tol: float, closed: float) -> float:
    return max(abs_tol, VERIFY_REL_SLACK * abs(closed))


def _cmd_verify(cfg: RunConfig, abs_tol: float) -> int:
    F = cfg.distribution()
    rows = []
    any_normative_fail = False
    for mid in cfg.measure_ids:
        T = parse_measure_id(mid)
        grid = parse_grid(cfg.grid) if cfg.grid else default_grid(F, T.id)
        # oracle values once per grid point, shared by all formula variants
        oracle: dict[float, float] = {}
        skip_reason = None
        dropped_points = 0
        try:
            for z in grid:
                try:
                    oracle[float(z)] = gateaux_if(T, F, float(z),
                                                  tol=cfg.tol).value
                except (NoisyLimit, KinkPoint, DomainError):
                    dropped_points += 1
        except (MomentDiverges, NonConvergence, DegenerateDenominator) as exc:
            skip_reason = str(exc)
        if skip_reason is None and not oracle:
            skip_reason = "no oracle-evaluable grid points"
        sources = [("theorem1", True, None,
                    lambda Fd, z, tol, spec, _T=T: if_special(_T, Fd, z, tol))]
        for variant in printed_variants(T.id):
            sources.append((variant.source, False, variant.note,
                            variant.evaluate))
        spec = T.spec
        for source, normative, note, evaluator in sources:
            if skip_reason is not None:
                rows.append({
                    "measure_id": T.id, "formula_source": source,
                    "normative": normative, "max_abs_err": None,
                    "verdict": "SKIP", "note": skip_reason,
                })
                continue
            max_err = 0.0
            ok = True
            evaluated = 0
            for z, oracle_value in oracle.items():
                try:
                    closed = evaluator(F, z, cfg.tol, spec)
                except IneqError:
                    continue
                evaluated += 1
                err = abs(closed - oracle_value)
                max_err = max(max_err, err)
                if err > _verify_tolerance(abs_tol, closed):
                    ok = False
            verdict = "PASS" if ok and evaluated else "FAIL"
            if not evaluated:
                verdict = "SKIP"
            rows.append({
                "measure_id": T.id, "formula_source": source,
                "normative": normative,
                "max_abs_err": max_err if evaluated else None,
                "verdict": verdict, "note": note,
            })
            if normative and verdict == "FAIL":
                any_normative_fail = True
    payload = _payload(cfg, distribution=F.descriptor(),
                       tolerance=abs_tol, rel_slack=VERIFY_REL_SLACK,
                       rows=rows)
    _emit(cfg, payload,
          ["measure_id", "formula_source", "normative", "max_abs_err",
           "verdict", "note"],
          rows)
    return EXIT_VERIFY if any_normative_fail else EXIT_OK


def _cmd_mc_study(cfg: RunConfig, n: int, reps: int) -> int:
    F = cfg.distribution()
    T = parse_measure_id(cfg.measure_ids[0])
    report = mc_variance_study(T, F, n, reps, RngStream(cfg.seed), cfg.tol)
    row = report.to_dict()
    payload = _payload(cfg, **row)
    columns = ["measure_id", "distribution", "n", "reps", "mc_variance",
               "if_variance", "ratio", "seed", "stream_id", "rejections",
               "degenerate"]
    _emit(cfg, payload, columns, [row])
    return EXIT_OK


def _cmd_compare_ge(cfg: RunConfig, alpha: float, abs_tol: float) -> int:
    F = cfg.distribution()
    mid = f"ge:{alpha:g}"
    grid = parse_grid(cfg.grid) if cfg.grid else default_grid(F, mid)
    rows = []
    with_ok = True
    without_max_excess = 0.0
    for z in grid:
        z = float(z)
        with_c = ge_if_with_coefficient(alpha, F, z, cfg.tol)
        without_c = ge_if_without_coefficient(alpha, F, z, cfg.tol)
        oracle = gateaux_if(parse_measure_id(mid), F, z, tol=cfg.tol).value
        tol_z = _verify_tolerance(abs_tol, with_c)
        err_with = abs(with_c - oracle)
        err_without = abs(without_c - oracle)
        if err_with > tol_z:
            with_ok = False
        without_max_excess = max(without_max_excess, err_without / tol_z)
        rows.append({
            "z": z, "if_with_coeff": with_c, "if_without_coeff": without_c,
            "oracle": oracle, "abs_err_with": err_with,
            "abs_err_without": err_without,
        })
    payload = _payload(
        cfg,
        distribution=F.descriptor(),
        alpha=alpha,
        tolerance=abs_tol,
        with_coefficient_matches_oracle=with_ok,
        without_coefficient_max_excess_over_tolerance=without_max_excess,
        rows=rows,
    )
    _emit(cfg, payload,
          ["z", "if_with_coeff", "if_without_coeff", "oracle",
           "abs_err_with", "abs_err_without"],
          rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidParameter(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ineqif", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, needs_ids=True):
        if needs_ids:
            p.add_argument("--id", help="single measure id, e.g. theil or ge:2")
            p.add_argument("--ids", help="comma list of measure ids, or 'all'")
        p.add_argument("--dist", help="distribution spec, e.g. exp:1")
        p.add_argument("--grid", help="z grid as min:max:count:log|lin")
        p.add_argument("--tol", type=float, default=None,
                       help="absolute tolerance override")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (written atomically)")

    p = sub.add_parser("measure", help="evaluate measures on a distribution "
                                       "or an income CSV")
    common(p)
    p.add_argument("--input", help="CSV file with one income per row")

    p = sub.add_parser("if-curve", help="closed-form IF (optionally oracle) "
                                        "over a z grid")
    common(p)
    p.add_argument("--oracle", action="store_true",
                   help="also run the Gateaux oracle per grid point")

    p = sub.add_parser("variance", help="asymptotic variance per measure")
    common(p)

    p = sub.add_parser("verify", help="adjudicate every formula against the "
                                      "Gateaux oracle")
    common(p)

    p = sub.add_parser("mc-study", help="Monte Carlo variance consistency "
                                        "study")
    common(p)
    p.add_argument("--n", type=int, default=20000)
    p.add_argument("--reps", type=int, default=400)

    p = sub.add_parser("compare-ge", help="GE IF with and without the "
                                          "leading coefficient vs the oracle")
    common(p, needs_ids=False)
    p.add_argument("--alpha", type=float, default=2.0)

    return parser


def _make_config(args) -> RunConfig:
    if args.tol is not None:
        if not args.tol > 0:
            raise InvalidParameter("--tol must be > 0")
        tol = Tolerance(abs_tol=min(args.tol * 1e-3, 1e-10),
                        rel_tol=1e-9,
                        max_subdivisions=DEFAULT_TOL.max_subdivisions)
    else:
        tol = DEFAULT_TOL
    needs_ids = args.command not in ("compare-ge",)
    ids = tuple(_expand_ids(getattr(args, "ids", None),
                            getattr(args, "id", None))) if needs_ids else ()
    if args.command in ("if-curve", "mc-study") and len(ids) != 1:
        raise InvalidParameter(f"{args.command} takes exactly one --id")
    return RunConfig(
        command=args.command,
        measure_ids=ids,
        dist=args.dist,
        input_path=getattr(args, "input", None),
        grid=args.grid,
        tol=tol,
        seed=args.seed,
        out=args.out,
        fmt=args.format,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except InvalidParameter as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return EXIT_USAGE

    fmt = getattr(args, "format", "csv")
    try:
        cfg = _make_config(args)
        abs_tol = args.tol if args.tol is not None else 1e-5
        if args.command == "measure":
            return _cmd_measure(cfg)
        if args.command == "if-curve":
            return _cmd_if_curve(cfg, with_oracle=args.oracle)
        if args.command == "variance":
            return _cmd_variance(cfg)
        if args.command == "verify":
            return _cmd_verify(cfg, abs_tol)
        if args.command == "mc-study":
            return _cmd_mc_study(cfg, args.n, args.reps)
        if args.command == "compare-ge":
            return _cmd_compare_ge(cfg, args.alpha, abs_tol)
        raise InvalidParameter(f"unknown command {args.command!r}")
    except _USAGE_FAILURES as exc:
        _report_error(fmt, exc)
        return EXIT_USAGE
    except _NUMERIC_FAILURES as exc:
        _report_error(fmt, exc)
        return EXIT_NUMERIC


def _report_error(fmt: str, exc: Exception) -> None:
    if fmt == "json":
        sys.stdout.write(render_json(
            {"error": {"type": type(exc).__name__, "message": str(exc)}}
        ))
    sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")


if __name__ == "__main__":
    sys.exit(main())
