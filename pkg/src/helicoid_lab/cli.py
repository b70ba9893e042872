"""Experiment driver: runs verification suites and writes results.json, CSV tables and a manifest."""

from __future__ import annotations

import argparse
import csv
import inspect
import json
import os
import platform
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .errors import LabError
from .suites import SUITES, SuiteResult

OUT_ENV = "HELICOID_LAB_OUT"
SUBCOMMANDS = ("forces", "residues", "barriers", "pde", "height", "flux", "all")
# suites run by each subcommand; "residues" also covers the Laurent suite
GROUPS = {
    "forces": ("forces",),
    "residues": ("residues", "laurent"),
    "barriers": ("barriers",),
    "pde": ("pde",),
    "height": ("height",),
    "flux": ("flux",),
    "all": ("residues", "laurent", "barriers", "pde", "height", "flux", "forces"),
}
CASES = {"1": "case1", "2": "case2", "3b": "case3b"}


class ConfigError(Exception):
    pass


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _suite_params(name: str) -> dict:
    sig = inspect.signature(SUITES[name])
    return {k: p.default for k, p in sig.parameters.items()}


def build_config(args) -> dict:
    """Per-suite parameters: signature defaults, then flags, then --set overrides."""
    suites = GROUPS[args.command]
    params = {s: _suite_params(s) for s in suites}

    def assign(key, value, only=None):
        hit = False
        for s in suites:
            if (only is None or s == only) and key in params[s]:
                params[s][key] = value
                hit = True
        return hit

    if args.seed is not None:
        assign("seed", args.seed)
    if getattr(args, "case", None):
        assign("cases", [CASES[args.case]], "forces")
    if getattr(args, "n", None) is not None:
        assign("n", args.n, "forces")
    if getattr(args, "trials", None) is not None:
        assign("trials", args.trials, "forces")
    if getattr(args, "exact", None):
        assign("exact", args.exact, "pde")
    if getattr(args, "refine", None) is not None:
        assign("refine", args.refine, "pde")
    for item in args.set or ():
        if "=" not in item:
            raise ConfigError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        only = None
        if "." in key:
            only, key = key.split(".", 1)
            if only not in suites:
                raise ConfigError(f"unknown suite {only!r} in --set {item!r}")
        if not assign(key, _parse_value(value), only):
            raise ConfigError(f"unknown configuration key {key!r}")
    for s in suites:
        params[s] = {k: (list(v) if isinstance(v, tuple) else v) for k, v in params[s].items()}
    return params


def _run_suite(name: str, params: dict):
    t0 = time.perf_counter()
    res = SUITES[name](**params)
    return res, time.perf_counter() - t0


def _fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, complex):
        return repr(x)
    return str(x)


def write_table(path: Path, table) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(f"# {table.description}; columns: {', '.join(table.columns)}\n")
        w = csv.writer(fh)
        w.writerow(table.columns)
        for row in table.rows:
            w.writerow([_fmt(v) for v in row])


def write_outputs(out: Path, command: str, config: dict, results: list[SuiteResult], timings: dict) -> None:
    out.mkdir(parents=True, exist_ok=True)
    passed = all(r.passed for r in results)
    doc = {
        "command": command,
        "config": config,
        "passed": passed,
        "suites": [r.as_dict() for r in results],
    }
    (out / "results.json").write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    files = ["results.json"]
    with open(out / "checks.csv", "w", newline="") as fh:
        fh.write("# one row per check; relation compares value with bound; columns: "
                 "suite, name, value, bound, relation, passed\n")
        w = csv.writer(fh)
        w.writerow(["suite", "name", "value", "bound", "relation", "passed"])
        for r in results:
            for c in r.checks:
                bound = c.bound if not isinstance(c.bound, (list, tuple)) else " ".join(map(_fmt, c.bound))
                w.writerow([r.name, c.name, _fmt(c.value), _fmt(bound), c.relation, c.passed])
    files.append("checks.csv")
    for r in results:
        for key, table in r.tables.items():
            name = f"{r.name}_{key}.csv"
            write_table(out / name, table)
            files.append(name)
    manifest = {
        "command": command,
        "config": config,
        "files": files,
        "timings_seconds": timings,
        "created": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "versions": {"helicoid_lab": __version__, "python": platform.python_version(),
                     "numpy": np.__version__, "scipy": scipy.__version__},
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (default 7)")
    common.add_argument("--out", type=Path, default=None,
                        help=f"output directory (default ${OUT_ENV} or ./helicoid_lab_out)")
    common.add_argument("--set", action="append", metavar="KEY=VALUE",
                        help="override a suite parameter; SUITE.KEY restricts it to one suite")
    common.add_argument("--jobs", type=int, default=1, help="suites run in parallel processes")
    common.add_argument("-q", "--quiet", action="store_true", help="only print failures")

    p = argparse.ArgumentParser(prog="helicoid-lab", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        sp = sub.add_parser(name, parents=[common], help=f"run the {name} suite(s)")
        if name in ("forces", "all"):
            sp.add_argument("--case", choices=sorted(CASES), default=None, help="force case (default: all)")
            sp.add_argument("--n", type=int, default=None, help="number of necks in the scan")
            sp.add_argument("--trials", type=int, default=None, help="trials per scan")
        if name in ("pde", "all"):
            sp.add_argument("--exact", choices=("helicoid", "catenoid"), default=None)
            sp.add_argument("--refine", type=int, default=None, help="number of grid halvings")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = build_config(args)
    except ConfigError as exc:
        parser.error(str(exc))  # exits 2
    out = args.out or Path(os.environ.get(OUT_ENV, "helicoid_lab_out"))
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"error: output directory {out}: {exc}", file=sys.stderr)
        return 2

    names = list(config)
    timings = {}
    try:
        if args.jobs > 1 and len(names) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                futures = [pool.submit(_run_suite, n, config[n]) for n in names]
                done = [f.result() for f in futures]
        else:
            done = [_run_suite(n, config[n]) for n in names]
    except (LabError, ValueError, TypeError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    results = []
    for n, (res, dt) in zip(names, done):
        results.append(res)
        timings[n] = round(dt, 3)
    write_outputs(out, args.command, config, results, timings)

    failing = [(r.name, c) for r in results for c in r.checks if not c.passed]
    if not args.quiet:
        for r in results:
            print(f"{r.name:9s} {'PASS' if r.passed else 'FAIL'}  ({len(r.checks)} checks, {timings[r.name]:.1f} s)")
    for name, c in failing:
        print(f"FAILED {name}: {c.name}: value={c.value!r} {c.relation} bound={c.bound!r}", file=sys.stderr)
    if not args.quiet:
        print(f"results written to {out}")
    return 1 if failing else 0


if __name__ == "__main__":
    sys.exit(main())
