"""Command-line entry point: ``scanstat {scan,detect,calibrate,simulate}``.

Output is JSON on stdout (or CSV with ``--format csv``). Unless ``--quiet``,
the fully resolved configuration is echoed to stderr as JSON, including an
``argv`` list that reproduces the run. Errors print ``{"error": ...}`` and
exit with 1 (I/O), 2 (parse) or 3 (domain).
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from typing import Optional, Sequence

import numpy as np

from . import asymptotics as asym
from .asymptotics import LimitLaw
from .errors import ParseError, ScanStatError
from .montecarlo import (ExperimentConfig, compare_to_limit, parse_statistic, run_experiment,
                         save_record, write_raw_csv)
from .order_core import cdf_transform, parse_null, read_values, sort_sample
from .scan_engine import ScanSpec, scan, scan_fast

EXIT_CODES = {"io": 1, "parse": 2, "domain": 3}
LAW_CHOICES = ("splus", "sminus", "sfull", "swindow")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def _common_flags() -> argparse.ArgumentParser:
    common = _ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed (default 0)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--csv", dest="format", action="store_const", const="csv",
                        help="shorthand for --format csv")
    common.add_argument("--quiet", action="store_true", help="no config echo on stderr")
    common.add_argument("--config", help="key=value file; flags given on the command line win")
    return common


def _window_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--variant", choices=("studentized", "standardized"), default="studentized")
    p.add_argument("--side", choices=("plus", "minus", "two_sided"), default="plus")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--l", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="scanstat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)
    common = _common_flags()

    p = sub.add_parser("scan", parents=[common], help="scan one sample")
    p.add_argument("input")
    _window_flags(p)
    p.add_argument("--null", default=None, help="transform raw data first, e.g. normal:0,1")
    p.add_argument("--asymptotic-window", action="store_true",
                   help="restrict lengths to C (log n)^3 (studentized plus only; marks exact=false)")
    p.add_argument("--window-constant", type=float, default=8.0)
    p.add_argument("--method", choices=("fast", "brute"), default="fast")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)

    p = sub.add_parser("detect", parents=[common], help="cluster / gap report for raw data")
    p.add_argument("input")
    p.add_argument("--null", required=True, help="uniform[:a,b] | normal:mu,sigma | exponential:rate | quantiles:path")

    p = sub.add_parser("calibrate", parents=[common], help="p-value or critical value")
    p.add_argument("--law", choices=LAW_CHOICES, required=True)
    p.add_argument("--n", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--alpha", type=float)
    group.add_argument("--observed", type=float)
    p.add_argument("--A", type=float, default=None)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo law of a statistic")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--replicates", type=int, default=1000)
    p.add_argument("--statistic", default="studentized:plus",
                   help="min_spacing | ks | eicker | eicker_studentized | VARIANT:SIDE[:k=K][:l=L]")
    p.add_argument("--law", choices=LAW_CHOICES, default=None)
    p.add_argument("--A", type=float, default=None)
    p.add_argument("--workers", type=int, default=1, help="0 = one per CPU")
    p.add_argument("--out", default=None, help="append the record to this JSON-lines file")
    p.add_argument("--raw", default=None, help="write per-replicate values to this CSV")
    p.add_argument("--backend", choices=("numba", "numpy"), default=None)
    return parser


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ParseError(f"config line without '=': {line!r}")
            out[key.strip().replace("-", "_")] = value.strip().strip('"')
    return out


def _parse(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        for key in cfg:
            if key not in known or key in ("config", "help"):
                raise ParseError(f"unknown config key {key!r} for {args.command}")
        defaults = {}
        for key, value in cfg.items():
            if isinstance(known[key], (argparse._StoreTrueAction,)):
                defaults[key] = value.lower() in ("1", "true", "yes", "on")
            else:
                defaults[key] = value
        sub.set_defaults(**defaults)
        args = parser.parse_args(argv)
    return args


def _echo_argv(args: argparse.Namespace) -> list:
    """Flags that reproduce ``args`` without the config file."""
    argv = [args.command]
    for key, value in sorted(vars(args).items()):
        if key in ("command", "config", "input") or value is None or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        argv += [flag] if value is True else [flag, str(value)]
    if getattr(args, "input", None) is not None:
        argv.append(args.input)
    return argv


def _emit(obj: dict, fmt: str, out) -> None:
    if fmt == "json":
        out.write(json.dumps(obj) + "\n")
        return
    flat = _flatten(obj)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(list(flat))
    writer.writerow(list(flat.values()))


def _flatten(obj, prefix="") -> dict:
    flat = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            flat.update(_flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, list) and obj and isinstance(obj[0], dict):
        for idx, v in enumerate(obj):
            flat.update(_flatten(v, f"{prefix}{idx}."))
    else:
        key = prefix[:-1]
        flat[key] = ";".join(map(str, obj)) if isinstance(obj, list) else obj
    return flat


def _law(name: str, A: Optional[float]) -> LimitLaw:
    return LimitLaw(name, A if name == "swindow" else None)


def cmd_scan(args) -> dict:
    data = read_values(args.input)
    sample = cdf_transform(data, parse_null(args.null)) if args.null else sort_sample(data)
    spec = ScanSpec(args.variant, args.side, args.k, args.l,
                    asymptotic_window=args.asymptotic_window, window_constant=args.window_constant)
    if args.method == "brute":
        return scan(sample, spec).to_dict()
    return scan_fast(sample, spec, backend=args.backend).to_dict()


def _data_interval(xs: np.ndarray, i: int, j: int) -> list:
    # order statistic i=0 is the virtual left endpoint; clamp into the data range
    return [float(xs[max(i, 1) - 1]), float(xs[min(j, xs.size) - 1])]


def cmd_detect(args) -> dict:
    null = parse_null(args.null)
    data = read_values(args.input)
    sample = cdf_transform(data, null)
    xs = np.sort(data, kind="stable")
    n = sample.n
    warnings = []
    if n <= asym.PRE_ASYMPTOTIC_N:
        warnings.append("pre_asymptotic_n")
    if np.unique(xs).size < n:
        warnings.append("ties_present")

    def block(spec: ScanSpec, law: LimitLaw, min_n: int):
        try:
            out = scan_fast(sample, spec)
        except ScanStatError as exc:
            warnings.append(f"{spec.variant}_{spec.side}_unavailable:{exc.name}")
            return None
        p = asym.p_value(law, n, out.value) if n >= min_n else None
        if p is None:
            warnings.append(f"{law.short_name}_p_value_unavailable")
        return {"value": out.value, "p_value": p, "i": out.i, "j": out.j,
                "interval": _data_interval(xs, out.i, out.j),
                "unit_interval": list(out.interval)}

    return {
        "n": n,
        "null": null.spec_string(),
        "cluster": block(ScanSpec("studentized", "plus"), LimitLaw("splus"), 3),
        "gap": block(ScanSpec("studentized", "minus"), LimitLaw("sminus"), 2),
        "standardized": block(ScanSpec("standardized", "plus"), LimitLaw("sfull"), 1),
        "warnings": warnings,
    }


def cmd_calibrate(args) -> dict:
    return asym.calibrate(_law(args.law, args.A), args.n, alpha=args.alpha, observed=args.observed)


def cmd_simulate(args):
    law = _law(args.law, args.A) if args.law else None
    config = ExperimentConfig(args.n, args.replicates, args.seed, parse_statistic(args.statistic),
                              law=law, parallelism=args.workers, backend=args.backend)
    emp = run_experiment(config)
    gof = compare_to_limit(emp, law) if law is not None else None
    if args.raw:
        write_raw_csv(args.raw, emp)
    if args.out:
        return save_record(args.out, config, emp, gof)
    record = {"config": config.key(), "summary": emp.summary(),
              "quantiles": emp.quantiles(), "digest": emp.digest()}
    if gof is not None:
        record["gof"] = gof.to_dict()
    return record


def _simulate_csv(record: dict, out) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["metric", "value"])
    for key, value in _flatten({k: v for k, v in record.items() if k != "config"}).items():
        writer.writerow([key, value])


COMMANDS = {"scan": cmd_scan, "detect": cmd_detect, "calibrate": cmd_calibrate,
            "simulate": cmd_simulate}


def _sanitize(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_sanitize(v) for v in obj]
    return obj


def main(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _parse(argv)
        if not args.quiet:
            stderr.write(json.dumps({"config": {k: v for k, v in vars(args).items()},
                                     "argv": _echo_argv(args)}) + "\n")
        if args.command == "calibrate" and args.alpha is None and args.observed is None:
            raise ParseError("calibrate needs --alpha or --observed")
        result = _sanitize(COMMANDS[args.command](args))
        if args.command == "simulate" and args.format == "csv":
            _simulate_csv(result, stdout)
        else:
            _emit(result, args.format, stdout)
        return 0
    except ScanStatError as exc:
        stdout.write(json.dumps({"error": exc.name, "message": str(exc)}) + "\n")
        return EXIT_CODES[exc.category]
    except OSError as exc:
        stdout.write(json.dumps({"error": "IOError", "message": str(exc)}) + "\n")
        return EXIT_CODES["io"]


if __name__ == "__main__":
    sys.exit(main())
