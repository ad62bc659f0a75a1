"""Command-line interface: fit, experiment, synth, rrmse, and resample.

Output files are written atomically (temp file then rename) so a failed
run never leaves a partial file; all numbers are printed with 9
significant digits so reruns with identical inputs and seeds are
byte-identical.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from datetime import timezone
from pathlib import Path

import numpy as np

from . import evaluation, ingest
from .cha import GaugeHarmonics, cha_fit
from .constituents import default_catalog_path, load_catalog
from .evaluation import MARK_INTERVALS, grid_to_text, interval_slice, run_grid, slice_to_text
from .ha import ha_fit
from .ingest import format_number as fmt
from .regularized import INIT_MIN_NORM_LS_RESCALED, RelshaConfig, relsha_fit
from .series import SamplingPlan, apply_noise, resample, synthesize_series

log = logging.getLogger("relsha")

CATALOG_ENV = "RELSHA_CATALOG"

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_CONVERGED = 3


def _atomic_write(path: str | Path, text: str) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _catalog_path(flag_value: str | None) -> Path:
    if flag_value:
        return Path(flag_value)
    env = os.environ.get(CATALOG_ENV)
    if env:
        return Path(env)
    return default_catalog_path()


def _bundled(name: str) -> str:
    return str(default_catalog_path().with_name(name))


def _load_config_file(path: str | None) -> dict:
    if not path:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    return data


def _resolve(flag_value, config: dict, key: str, default):
    """Precedence: command-line flag, then config file, then default."""
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part.strip()]


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def cmd_fit(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config)
    catalog = load_catalog(_catalog_path(args.catalog))
    series = ingest.load_water_levels(args.input)
    lam = _resolve(args.lam, config, "lambda", 0.5)
    normalize = _resolve(args.normalize_terms or None, config, "normalize_terms", False)
    max_iterations = _resolve(args.max_iterations, config, "max_iterations", 2000)
    init = _resolve(args.init, config, "init", INIT_MIN_NORM_LS_RESCALED)

    diagnostics: dict[str, object] = {"method": args.method}
    exit_code = EXIT_OK
    if args.method == "ha":
        result = ha_fit(series, catalog)
        solution = result.solution
        diagnostics.update(
            regime=result.regime, sample_count=result.sample_count, rank=result.rank
        )
    elif args.method == "cha":
        if not args.reference_a or not args.reference_b:
            raise ValueError("fit --method cha requires --reference-a and --reference-b")
        ref_a = GaugeHarmonics(Path(args.reference_a).stem, ingest.load_harmonics(args.reference_a, catalog)[0])
        ref_b = GaugeHarmonics(Path(args.reference_b).stem, ingest.load_harmonics(args.reference_b, catalog)[0])
        result = cha_fit(series, ref_a, ref_b, catalog)
        solution = result.solution
        diagnostics.update(
            weight=fmt(result.weight),
            objective=fmt(result.objective),
            identifiable=_bool_text(result.identifiable),
            sample_count=result.sample_count,
        )
    else:
        if not args.reference:
            raise ValueError("fit --method relsha requires --reference")
        reference, _ = ingest.load_harmonics(args.reference, catalog)
        fit_config = RelshaConfig(
            lam=float(lam),
            max_iterations=int(max_iterations),
            normalize_terms=bool(normalize),
            init_strategy=str(init),
        )
        result = relsha_fit(series, reference.amplitudes, catalog, fit_config)
        solution = result.solution
        d = result.diagnostics
        diagnostics.update(
            **{"lambda": fmt(fit_config.lam)},
            iterations=d.iterations,
            final_objective=fmt(d.objective),
            gradient_norm=fmt(d.gradient_norm),
            gradient_tolerance=fmt(d.gradient_tolerance),
            converged=_bool_text(d.converged),
            regime=d.regime,
            sample_count=d.sample_count,
        )
        if not d.converged:
            log.warning("relsha did not converge: gradient norm %.3e above %.3e",
                        d.gradient_norm, d.gradient_tolerance)
            if args.strict:
                exit_code = EXIT_NOT_CONVERGED

    _atomic_write(args.output, ingest.solution_to_text(solution, diagnostics))
    return exit_code


def cmd_experiment(args: argparse.Namespace) -> int:
    config = _load_config_file(args.config)
    catalog = load_catalog(_catalog_path(args.catalog))
    truth_path = _resolve(args.truth, config, "truth", _bundled("synthetic_truth.csv"))
    reference_path = _resolve(args.reference, config, "reference", _bundled("reference_nearby.csv"))
    ref_a_path = _resolve(args.reference_a, config, "reference_a", _bundled("reference_nearby.csv"))
    ref_b_path = _resolve(args.reference_b, config, "reference_b", _bundled("reference_offshore.csv"))
    methods = tuple(_resolve(args.methods, config, "methods", "ha,cha,relsha").split(","))
    intervals = _resolve(
        _float_list(args.intervals) if args.intervals else None, config, "intervals",
        evaluation.default_intervals().tolist(),
    )
    lengths = _resolve(
        _float_list(args.lengths) if args.lengths else None, config, "lengths",
        evaluation.default_lengths().tolist(),
    )
    seed = int(_resolve(args.seed, config, "seed", 0))
    noise = float(_resolve(args.noise, config, "noise", 0.0))
    lam = float(_resolve(args.lam, config, "lambda", 0.5))
    normalize = bool(_resolve(args.normalize_terms or None, config, "normalize_terms", False))
    base_interval = float(_resolve(args.base_interval, config, "base_interval", 0.1))
    threads = int(_resolve(args.threads, config, "threads", os.cpu_count() or 1))

    truth, _ = ingest.load_harmonics(truth_path, catalog)
    reference, _ = ingest.load_harmonics(reference_path, catalog)
    ref_a = GaugeHarmonics(Path(ref_a_path).stem, ingest.load_harmonics(ref_a_path, catalog)[0])
    ref_b = GaugeHarmonics(Path(ref_b_path).stem, ingest.load_harmonics(ref_b_path, catalog)[0])

    # Dense base record, 5% longer than the longest cut so the random
    # start offset has room to vary.
    span = 1.05 * max(lengths)
    times = np.arange(0.0, span + base_interval / 2, base_interval)
    base = synthesize_series(truth, times)
    if noise > 0:
        base = apply_noise(base, noise, seed=evaluation.cell_seed(seed, 999_983, 0))

    grid = run_grid(
        base,
        truth.amplitudes,
        catalog,
        intervals=intervals,
        lengths=lengths,
        methods=methods,
        base_seed=seed,
        relsha_reference=reference.amplitudes,
        relsha_config=RelshaConfig(lam=lam, normalize_terms=normalize),
        cha_ref_a=ref_a,
        cha_ref_b=ref_b,
        threads=threads,
    )
    _atomic_write(args.output, grid_to_text(grid))

    output = Path(args.output)
    for mark, label in MARK_INTERVALS:
        if mark in grid.intervals:
            curves = interval_slice(grid, mark)
            slice_path = output.with_name(f"{output.stem}_slice_{label}{output.suffix}")
            _atomic_write(slice_path, slice_to_text(curves))

    cells = list(grid.rows())
    missing = [cell for cell in cells if cell.rrmse_percent is None]
    if missing:
        log.warning("%d of %d cells missing (solver or resampling errors)",
                    len(missing), len(cells))
    return EXIT_OK


def cmd_synth(args: argparse.Namespace) -> int:
    catalog = load_catalog(_catalog_path(args.catalog))
    solution, _ = ingest.load_harmonics(args.solution, catalog)
    if args.length < args.interval:
        raise ValueError("synth requires --length of at least one --interval")
    count = int(np.floor(args.length / args.interval)) + 1
    times = args.interval * np.arange(count)
    epoch = ingest.parse_timestamp(args.epoch).astimezone(timezone.utc)
    series = synthesize_series(solution, times, epoch)
    if args.noise > 0:
        series = apply_noise(series, args.noise, args.seed)
    _atomic_write(args.output, ingest.water_levels_to_text(series))
    return EXIT_OK


def cmd_rrmse(args: argparse.Namespace) -> int:
    catalog = load_catalog(_catalog_path(args.catalog))
    estimated, _ = ingest.load_harmonics(args.estimated, catalog)
    truth, _ = ingest.load_harmonics(args.truth, catalog)
    print(fmt(evaluation.rrmse(estimated.amplitudes, truth.amplitudes)))
    return EXIT_OK


def cmd_resample(args: argparse.Namespace) -> int:
    series = ingest.load_water_levels(args.input)
    plan = SamplingPlan(interval=args.interval, record_length=args.length, seed=args.seed)
    sampled = resample(series, plan)
    _atomic_write(args.output, ingest.water_levels_to_text(sampled))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="relsha",
        description="Tidal constituent amplitude estimation from (under)sampled water levels.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a method to a water-level file")
    fit.add_argument("--method", required=True, choices=["ha", "cha", "relsha"])
    fit.add_argument("--input", required=True, help="water-level CSV (timestamp,height_m)")
    fit.add_argument("--output", required=True, help="solution file to write")
    fit.add_argument("--catalog", help=f"constituent catalog (default ${CATALOG_ENV} or bundled)")
    fit.add_argument("--reference", help="reference amplitudes file (relsha)")
    fit.add_argument("--reference-a", help="first reference gauge harmonics (cha)")
    fit.add_argument("--reference-b", help="second reference gauge harmonics (cha)")
    fit.add_argument("--lambda", dest="lam", type=float, help="regularization weight in [0,1]")
    fit.add_argument("--normalize-terms", action="store_true",
                     help="scale the data term by 1/m and the penalty by 1/n")
    fit.add_argument("--max-iterations", type=int)
    fit.add_argument("--init", choices=["min_norm_ls_rescaled", "reference_zero_phase"])
    fit.add_argument("--strict", action="store_true",
                     help="exit with status 3 when the solver does not converge")
    fit.add_argument("--config", help="JSON config file (flags override it)")
    fit.set_defaults(func=cmd_fit)

    experiment = sub.add_parser("experiment", help="run the interval-by-length error grid")
    experiment.add_argument("--output", required=True, help="grid CSV to write")
    experiment.add_argument("--truth", help="truth harmonics file (default: bundled synthetic truth)")
    experiment.add_argument("--reference", help="relsha reference amplitudes file")
    experiment.add_argument("--reference-a", help="first cha reference gauge")
    experiment.add_argument("--reference-b", help="second cha reference gauge")
    experiment.add_argument("--methods", help="comma list from {ha,cha,relsha}")
    experiment.add_argument("--intervals", help="comma list of sampling intervals in hours")
    experiment.add_argument("--lengths", help="comma list of record lengths in hours")
    experiment.add_argument("--base-interval", type=float, help="base series spacing in hours")
    experiment.add_argument("--noise", type=float, help="Gaussian noise sigma for the base series")
    experiment.add_argument("--seed", type=int)
    experiment.add_argument("--threads", type=int, help="parallel grid cells (results identical)")
    experiment.add_argument("--lambda", dest="lam", type=float)
    experiment.add_argument("--normalize-terms", action="store_true")
    experiment.add_argument("--catalog")
    experiment.add_argument("--config", help="JSON config file (flags override it)")
    experiment.set_defaults(func=cmd_experiment)

    synth = sub.add_parser("synth", help="synthesize a water-level file from a solution")
    synth.add_argument("--solution", required=True, help="harmonics/solution file")
    synth.add_argument("--output", required=True)
    synth.add_argument("--interval", type=float, required=True, help="sample spacing in hours")
    synth.add_argument("--length", type=float, required=True, help="record length in hours")
    synth.add_argument("--noise", type=float, default=0.0)
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--epoch", default="2021-01-01T00:00:00Z")
    synth.add_argument("--catalog")
    synth.set_defaults(func=cmd_synth)

    rrmse_cmd = sub.add_parser("rrmse", help="amplitude RRMSE between two harmonics files")
    rrmse_cmd.add_argument("--estimated", required=True)
    rrmse_cmd.add_argument("--truth", required=True)
    rrmse_cmd.add_argument("--catalog")
    rrmse_cmd.set_defaults(func=cmd_rrmse)

    resample_cmd = sub.add_parser("resample", help="resample a water-level file")
    resample_cmd.add_argument("--input", required=True)
    resample_cmd.add_argument("--output", required=True)
    resample_cmd.add_argument("--interval", type=float, required=True)
    resample_cmd.add_argument("--length", type=float, required=True)
    resample_cmd.add_argument("--seed", type=int, default=0)
    resample_cmd.set_defaults(func=cmd_resample)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return args.func(args)
    except Exception as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
