"""Command-line interface.

Subcommands: ``predict``, ``evaluate``, ``grid-search``, ``stats``, ``synth``.
Exit codes: 0 success, 1 input error, 2 some routes failed.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .batch import evaluate, grid_search, run_batch
from .config import ALL_KEYS, load_config
from .data import DataError, dump_dataset, impute_missing_zones, load_dataset, sequence_to_ranks, zone_property_stats
from .synth import generate_synthetic_dataset

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_PARTIAL = 2

DATA_FILES = {
    "route_file": "route_data.json",
    "travel_time_file": "travel_times.json",
    "package_file": "package_data.json",
    "actual_file": "actual_sequences.json",
}

log = logging.getLogger("routeseq")


def _add_data_args(p: argparse.ArgumentParser, actuals: bool):
    p.add_argument("--data-dir", type=Path, help="directory holding the four default-named JSON files")
    p.add_argument("--route-file", type=Path)
    p.add_argument("--travel-time-file", type=Path)
    p.add_argument("--package-file", type=Path)
    p.add_argument("--actual-file", type=Path, help="actual sequences" + (" (required)" if actuals else ""))


def _add_run_args(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="key = value config file")
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--time-budget", type=float, dest="time_budget")
    for key in ("h", "k"):
        p.add_argument(f"--{key}", type=int)
    for key in ("alpha", "beta", "gamma", "p", "theta", "eta"):
        p.add_argument(f"--{key}", type=float)


def _paths(args, need_actuals: bool):
    paths = {}
    for key, default in DATA_FILES.items():
        val = getattr(args, key, None)
        if val is None and args.data_dir is not None:
            cand = args.data_dir / default
            if key != "actual_file" or cand.exists() or need_actuals:
                val = cand
        paths[key] = val
    missing = [k for k in ("route_file", "travel_time_file", "package_file") if paths[k] is None]
    if need_actuals and paths["actual_file"] is None:
        missing.append("actual_file")
    if missing:
        raise DataError("missing input paths: " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return paths


def _load(args, need_actuals: bool, errors: dict):
    p = _paths(args, need_actuals)
    bundles = load_dataset(p["route_file"], p["travel_time_file"], p["package_file"], p["actual_file"], errors=errors)
    if not bundles and not errors:
        raise DataError("dataset is empty")
    return bundles


def _config(args):
    overrides = {k: getattr(args, k, None) for k in ALL_KEYS}
    return load_config(args.config, overrides)


def _write_json(path: Path, payload):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")


def _exit_code(errors: dict) -> int:
    return EXIT_PARTIAL if errors else EXIT_OK


def cmd_predict(args) -> int:
    cfg = _config(args)
    errors: dict = {}
    bundles = _load(args, need_actuals=False, errors=errors)
    results = run_batch(bundles.values(), cfg, score=False)
    preds = {}
    for r in results:
        if r.error is not None:
            errors[r.route_id] = r.error
        else:
            preds[r.route_id] = sequence_to_ranks(r.order)
    out = Path(args.out)
    _write_json(out, preds)
    _write_json(out.with_name(out.stem + ".errors.json"), dict(sorted(errors.items())))
    print(f"predicted {len(preds)} route(s), {len(errors)} error(s) -> {out}")
    return _exit_code(errors)


def write_reports(out_dir: Path, results, bs, load_errors: dict, cfg) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    errors = dict(load_errors)
    errors.update(bs.errors)
    _write_json(
        out_dir / "predictions.json", {r.route_id: sequence_to_ranks(r.order) for r in results if r.order is not None}
    )
    with open(out_dir / "scores.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["route_id", "score", "seq_deviation", "erp_total", "erp_edits"])
        for r in bs.reports:
            w.writerow([r.route_id, repr(r.score), repr(r.seq_deviation), repr(r.erp_total), r.erp_edits])
    with open(out_dir / "histogram.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["bin_low", "bin_high", "count"])
        w.writerows(bs.histogram())
    unproven = sum(1 for r in results if r.error is None and not r.all_optimal)
    summary = bs.summary_line() + f" unproven_solves={unproven}"
    # worker count is left out so reports are identical across parallelism levels
    settings = "".join(f"{k} = {v}\n" for k, v in cfg.flat().items() if k != "workers")
    (out_dir / "summary.txt").write_text(summary + "\n" + settings, encoding="utf-8")
    _write_json(out_dir / "errors.json", dict(sorted(errors.items())))
    return errors


def cmd_evaluate(args) -> int:
    cfg = _config(args)
    load_errors: dict = {}
    bundles = _load(args, need_actuals=True, errors=load_errors)
    results, bs = evaluate(bundles.values(), cfg)
    errors = write_reports(Path(args.out), results, bs, load_errors, cfg)
    print(bs.summary_line())
    return _exit_code(errors)


def _parse_grid_args(items, grid_file):
    grid = {}
    if grid_file is not None:
        grid.update(json.loads(Path(grid_file).read_text(encoding="utf-8")))
    for item in items or []:
        key, sep, values = item.partition("=")
        if not sep:
            raise ValueError(f"--grid expects NAME=V1,V2,..., got {item!r}")
        grid[key.strip()] = [v for v in values.split(",") if v.strip()]
    return grid


def cmd_grid_search(args) -> int:
    cfg = _config(args)
    grid = _parse_grid_args(args.grid, args.grid_file)
    load_errors: dict = {}
    bundles = _load(args, need_actuals=True, errors=load_errors)
    rows = grid_search(bundles.values(), cfg, grid)
    names = [k for k, _ in rows[0].params]
    lines = [",".join(names + ["mean_score", "n_scored", "n_errors"])]
    for row in rows:
        mean = "" if row.mean_score is None else repr(row.mean_score)
        lines.append(",".join([repr(v) for _, v in row.params] + [mean, str(row.n_scored), str(row.n_errors)]))
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    print("best: " + " ".join(f"{k}={v}" for k, v in rows[0].params))
    return _exit_code(load_errors or any(r.n_errors for r in rows))


def cmd_stats(args) -> int:
    errors: dict = {}
    bundles = _load(args, need_actuals=True, errors=errors)
    imputed = []
    for rid, b in bundles.items():
        try:
            imputed.append(impute_missing_zones(b))
        except DataError as exc:
            errors[rid] = str(exc)
    if not imputed:
        raise DataError("no usable routes")
    stats = zone_property_stats(imputed)
    print(f"routes={len(imputed)} adjacent_zone_pairs={stats.n_pairs}")
    for line in stats.lines():
        print(line)
    return _exit_code(errors)


def cmd_synth(args) -> int:
    bundles = generate_synthetic_dataset(
        args.n_routes, tuple(args.zones), tuple(args.stops), args.noise, args.seed
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    dump_dataset(
        bundles,
        out / DATA_FILES["route_file"],
        out / DATA_FILES["travel_time_file"],
        out / DATA_FILES["package_file"],
        out / DATA_FILES["actual_file"],
    )
    print(f"wrote {len(bundles)} synthetic route(s) to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="routeseq", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("predict", help="predict stop sequences")
    _add_data_args(p, actuals=False)
    _add_run_args(p)
    p.add_argument("--out", required=True, help="prediction JSON (route -> stop -> index)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="predict, post-process and score against actual sequences")
    _add_data_args(p, actuals=True)
    _add_run_args(p)
    p.add_argument("--out", required=True, help="output directory for reports")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("grid-search", help="evaluate a Cartesian grid of parameters")
    _add_data_args(p, actuals=True)
    _add_run_args(p)
    p.add_argument("--grid", action="append", metavar="NAME=V1,V2", help="repeatable")
    p.add_argument("--grid-file", type=Path, help='JSON object, e.g. {"alpha": [1.0, 1.04]}')
    p.add_argument("--out", help="CSV table of grid results")
    p.set_defaults(func=cmd_grid_search)

    p = sub.add_parser("stats", help="zone-label property frequencies of the actual sequences")
    _add_data_args(p, actuals=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("synth", help="write a planted synthetic dataset")
    p.add_argument("--n-routes", type=int, default=100)
    p.add_argument("--zones", type=int, nargs=2, default=(4, 8), metavar=("MIN", "MAX"))
    p.add_argument("--stops", type=int, nargs=2, default=(3, 6), metavar=("MIN", "MAX"))
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (DataError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
