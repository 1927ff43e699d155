"""Command-line entry point: ``nngpkrig {scan-validity,compare-1d,benchmark,predict}``.

Options may also come from a ``key=value`` config file (``--config``); flags
given on the command line win.  Every output carries the fully resolved
configuration, so re-running it reproduces the file byte for byte.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from . import linalg
from .bench import BenchmarkCase, load_csv
from .errors import NNGPKrigError
from .kernels import DEFAULT_NUGGET, MaternSpec, NNGPSpec, default_rho_grid
from .studies import (
    BenchmarkConfig,
    compare_1d,
    predict,
    run_benchmark,
    scan_validity,
    summary_table,
)

log = logging.getLogger("nngpkrig")


def _int_list(text):
    return [int(t) for t in str(text).replace(" ", "").split(",") if t]


def _float_or_inf(text):
    return math.inf if str(text).lower() in ("inf", "infinity", "rbf") else float(text)


def _add_common(p):
    p.add_argument("--config", help="key=value file supplying defaults for any option")
    p.add_argument("--nugget", type=float, default=DEFAULT_NUGGET)
    p.add_argument("--out", help="output path (stdout when omitted)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nngpkrig", description="NNGP and Matérn Gaussian-process studies.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan-validity", help="NNGP validity over a (sigma_a, sigma_b) grid")
    _add_common(p)
    p.add_argument("--depths", type=_int_list, default=[2, 5, 10, 20])
    p.add_argument("--grid-res", type=int, default=20)
    p.add_argument("--sigma-min", type=float, default=0.1)
    p.add_argument("--sigma-max", type=float, default=2.0)
    p.add_argument("--n", type=int, default=50, help="number of 1-D grid points")
    p.add_argument("--eps-flat", type=float, default=linalg.EPS_FLAT)

    p = sub.add_parser("compare-1d", help="NNGP vs Matérn 3/2 kriging weights in 1-D")
    _add_common(p)
    p.add_argument("--n", type=_int_list, default=[10, 25, 50, 100, 150])
    p.add_argument("--design", choices=("grid", "sobol", "both"), default="grid")
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--sigma-a", type=float, default=1.0)
    p.add_argument("--sigma-b", type=float, default=0.5)
    p.add_argument("--rho-min", type=float, default=0.05)
    p.add_argument("--rho-max", type=float, default=5.0)
    p.add_argument("--rho-count", type=int, default=20)
    p.add_argument("--predict-at", choices=("midpoints", "center"), default="midpoints")
    p.add_argument("--matern-inputs", choices=("embedded", "unit"), default="embedded")

    p = sub.add_parser("benchmark", help="accuracy and kriging-weight comparison of the three kernel arms")
    _add_common(p)
    p.add_argument("--case", choices=("friedman", "borehole", "csv"), default="friedman")
    p.add_argument("--csv", help="data file for --case csv (columns x1..xd,y)")
    p.add_argument("--iterations", type=int, default=10)
    p.add_argument("--n", type=int, default=500, help="training points per iteration")
    p.add_argument("--m", type=int, default=500, help="test points per iteration")
    p.add_argument("--noise-sd", type=float, default=None,
                   help="training noise sd (default 1 for friedman, 0 otherwise)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--grid-res", type=int, default=20)
    p.add_argument("--sigma-min", type=float, default=0.1)
    p.add_argument("--sigma-max", type=float, default=2.0)
    p.add_argument("--rho", type=float, default=1.0, help="length scale of the fixed Matérn arm")
    p.add_argument("--rho-min", type=float, default=0.05)
    p.add_argument("--rho-max", type=float, default=5.0)
    p.add_argument("--rho-count", type=int, default=20)
    p.add_argument("--nus", default="0.5,1.5,2.5,inf")

    p = sub.add_parser("predict", help="posterior mean and sd at test rows")
    _add_common(p)
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--kernel", choices=("matern", "nngp"), default="matern")
    p.add_argument("--nu", type=_float_or_inf, default=1.5)
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--sigma2", type=float, default=1.0)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--sigma-a", type=float, default=1.0)
    p.add_argument("--sigma-b", type=float, default=0.5)
    p.add_argument("--trend", choices=("none", "linear"), default="none")
    p.add_argument("--no-scale", action="store_true", help="use raw inputs (no unit-cube scaling)")
    return parser


def read_config(path) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, dashes and underscores are equivalent."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv=None) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "config", None):
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in read_config(args.config).items():
            if key not in known or key in ("config", "help"):
                parser.error(f"unknown config key {key!r} for {args.command}")
            action = known[key]
            if action.type is not None:
                value = action.type(value)
            elif isinstance(action, argparse._StoreTrueAction):
                value = value.lower() in ("1", "true", "yes", "on")
            defaults[key] = value
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def resolved_config(args) -> dict:
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "verbose", "out")}
    return json.loads(json.dumps(cfg, default=str))


def _csv_text(rows, columns, config) -> str:
    buf = io.StringIO()
    buf.write("# config: " + json.dumps(config, sort_keys=True) + "\n")
    w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
    return buf.getvalue()


def _json_text(payload, config) -> str:
    return json.dumps({"config": config, **payload}, indent=2, sort_keys=False) + "\n"


def _emit(text, out):
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _emit_table(args, rows, columns):
    config = resolved_config(args)
    if args.format == "json":
        _emit(_json_text({"rows": rows}, config), args.out)
    else:
        _emit(_csv_text(rows, columns, config), args.out)


def cmd_scan_validity(args):
    if args.grid_res < 2:
        raise SystemExit("nngpkrig scan-validity: error: --grid-res must be >= 2")
    rows = scan_validity(args.depths, args.grid_res, args.sigma_min, args.sigma_max, args.n,
                         args.nugget, args.eps_flat)
    _emit_table(args, rows, ["depth", "sigma_a", "sigma_b", "is_pd", "is_flat", "min_gap"])


def cmd_compare_1d(args):
    designs = ("grid", "sobol") if args.design == "both" else (args.design,)
    rhos = default_rho_grid(args.rho_min, args.rho_max, args.rho_count)
    spec = NNGPSpec(args.depth, args.sigma_a, args.sigma_b, 2)
    rows = compare_1d(args.n, designs, spec, rhos, args.nugget, args.predict_at, args.matern_inputs)
    _emit_table(args, rows, ["n", "design", "best_rho", "max_abs_diff"])


def cmd_benchmark(args):
    if args.case == "csv":
        if not args.csv:
            raise SystemExit("nngpkrig benchmark: error: --case csv needs --csv PATH")
        if not Path(args.csv).exists():
            raise FileNotFoundError(args.csv)
    if args.noise_sd is None:
        args.noise_sd = 1.0 if args.case == "friedman" else 0.0
    case = BenchmarkCase(args.case, args.n, args.m, args.noise_sd, args.seed, args.csv)
    cfg = BenchmarkConfig(
        case=case,
        iterations=args.iterations,
        nngp_depth=args.depth,
        nngp_sigma_min=args.sigma_min,
        nngp_sigma_max=args.sigma_max,
        nngp_grid_res=args.grid_res,
        matern_fixed=MaternSpec(1.5, args.rho, 1.0),
        matern_nus=tuple(_float_or_inf(v) for v in args.nus.split(",")),
        matern_rhos=tuple(default_rho_grid(args.rho_min, args.rho_max, args.rho_count)),
        nugget=args.nugget,
    )
    report = run_benchmark(cfg)
    config = resolved_config(args)
    rows = summary_table(report, args.case)
    columns = list(rows[0])
    json_text = _json_text(report, config)
    csv_text = _csv_text(rows, columns, config)
    if args.out:
        base = Path(args.out)
        base = base.with_suffix("") if base.suffix in (".json", ".csv") else base
        _emit(json_text, str(base) + ".json")
        _emit(csv_text, str(base) + ".csv")
    else:
        _emit(json_text if args.format == "json" else csv_text, None)
    if report["failures"]:
        log.warning("%d of %d iterations failed", len(report["failures"]), args.iterations)


def cmd_predict(args):
    train, test = load_csv(args.train), load_csv(args.test)
    if args.kernel == "matern":
        kernel = MaternSpec(args.nu, args.rho, args.sigma2)
    else:
        kernel = NNGPSpec(args.depth, args.sigma_a, args.sigma_b, 2 * train.dim)
    rows = predict(train, test, kernel, args.nugget, args.trend, scale=not args.no_scale)
    _emit_table(args, rows, ["prediction", "posterior_sd"])


COMMANDS = {
    "scan-validity": cmd_scan_validity,
    "compare-1d": cmd_compare_1d,
    "benchmark": cmd_benchmark,
    "predict": cmd_predict,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        COMMANDS[args.command](args)
    except (NNGPKrigError, FileNotFoundError, OSError) as err:
        print(f"nngpkrig {args.command}: error: {err}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
