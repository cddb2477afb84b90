"""Command-line entry point.

Subcommands produce the individual artifacts (scale table, excursion
table, boundary table, simulation report) or run a full scenario that
ties them together.  All file formats are documented in FORMATS.md at
the repository root.

Exit codes: 0 success (and, for ``run``, all enabled checks passed);
2 target measure not admissible for the requested rule; 3 numeric
failure; 64 usage error (bad flags, malformed JSON, unknown keys).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from .errors import AdmissibilityError, DomainError, NumericError, \
    SnLevyError, UnsupportedError
from .excursion import ExcursionLaw
from .measure import TargetMeasure, measure_from_dict
from .model import LevyModel, model_from_dict
from .scale import ScaleFunction
from .embedding import (build_density, build_one_sided, build_two_sided,
                        law_of_local_time)
from .montecarlo import (RULE_ONESIDED, RULE_PLAIN, RULE_TILDE, SimConfig,
                         backend_name, run_stop_T, run_stop_T_mu,
                         run_stop_T_tilde, validate)

log = logging.getLogger("snlevy")

EXIT_OK = 0
EXIT_INADMISSIBLE = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

# stopping rule per theorem selector: 1 signed two-sided, 2 plain
# two-sided (atom-free targets), 3 one-sided upward
_BUILDERS = {1: build_two_sided, 2: build_density, 3: build_one_sided}
_RUNNERS = {1: run_stop_T_tilde, 2: run_stop_T, 3: run_stop_T_mu}

_SCENARIO_KEYS = {"model", "measure", "theorem", "scale", "sim", "checks"}
_SIM_KEYS = {"dt", "t_max", "n_paths", "seed", "eps", "accel_cap",
             "res_cut_mult"}
_SCALE_KEYS = {"x_max", "h"}
_CHECK_KEYS = {"censor_max", "ks_max", "mean_tol_se"}


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _fmt(v: float) -> str:
    """Shortest round-tripping decimal form; keeps reruns byte-identical."""
    return repr(float(v))


def _write_csv(path: str, header: list, rows) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    with open(path, "w", newline="") as fh:
        fh.write(buf.getvalue())


def _default_x_max(measure: TargetMeasure) -> float:
    span = measure.b_mu - min(measure.a_mu, 0.0)
    return 1.1 * max(span, 1.0) + 1.0


def _build_scale(model: LevyModel, measure: TargetMeasure,
                 params: dict) -> ScaleFunction:
    x_max = float(params.get("x_max", _default_x_max(measure)))
    h = float(params.get("h", 1e-4))
    return ScaleFunction(model, x_max, h)


def _default_t_max(measure: TargetMeasure, scale: ScaleFunction) -> float:
    """Ten times the expected exit time of the target's support."""
    a = measure.a_mu if measure.a_mu < 0 else -measure.b_mu
    b = measure.b_mu
    try:
        et = scale.expected_exit_time(0.0, a, b)
    except SnLevyError:
        et = 1.0
    return 10.0 * max(et, 0.1)


def _sim_config(sim: dict, measure: TargetMeasure,
                scale: ScaleFunction, seed_override=None) -> SimConfig:
    extra = set(sim) - _SIM_KEYS
    if extra:
        raise DomainError(f"unknown sim keys: {sorted(extra)}")
    kw = dict(sim)
    kw.setdefault("t_max", _default_t_max(measure, scale))
    if seed_override is not None:
        kw["seed"] = seed_override
    return SimConfig(**kw)


def _write_samples(path: str, result) -> None:
    rows = []
    for i in range(len(result.x)):
        rows.append([i, _fmt(result.t[i]), _fmt(result.x[i]),
                     _fmt(result.l[i]), int(result.status[i] == 4)])
    _write_csv(path, ["path_id", "T", "X_T", "L_T", "censored"], rows)


def _write_report(path: str, report: dict) -> None:
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _simulate(model, measure, theorem, scale, config, threads):
    boundary = _BUILDERS[theorem](measure, scale)
    result = _RUNNERS[theorem](boundary, model, config, threads=threads)
    rep = validate(result, measure, scale=scale, boundary=boundary,
                   xlaw=ExcursionLaw(scale))
    return boundary, result, rep


# ---------------------------------------------------------------- commands

def cmd_scale_table(args) -> int:
    model = model_from_dict(_load_json(args.model))
    scale = ScaleFunction(model, args.x_max, args.h)
    xs = np.arange(0.0, args.x_max + args.step / 2, args.step)
    rows = ([_fmt(x), _fmt(scale.w(x)), _fmt(scale.w_prime(x))]
            for x in xs)
    _write_csv(args.out, ["x", "W", "W_prime"], rows)
    log.info("scale table written to %s", args.out)
    return EXIT_OK


def cmd_excursion_table(args) -> int:
    model = model_from_dict(_load_json(args.model))
    scale = ScaleFunction(model, args.x_max, args.h)
    xlaw = ExcursionLaw(scale)
    heights = np.arange(args.step, args.x_max - args.step / 2, args.step)
    rows = []
    for a in heights:
        up, dn = xlaw.n_signed_max(a)
        rows.append([_fmt(a), _fmt(xlaw.n_sup_ge(a)), _fmt(xlaw.n_inf_le(a)),
                     _fmt(up), _fmt(dn)])
    _write_csv(args.out, ["a", "n_sup_ge", "n_inf_le",
                          "n_signed_max_up", "n_signed_max_down"], rows)
    log.info("excursion table written to %s", args.out)
    return EXIT_OK


def cmd_boundary(args) -> int:
    model = model_from_dict(_load_json(args.model))
    measure = measure_from_dict(_load_json(args.measure))
    scale = _build_scale(model, measure,
                         {"x_max": args.x_max, "h": args.h}
                         if args.x_max else {"h": args.h})
    boundary = _BUILDERS[args.theorem](measure, scale)
    fm = boundary.fminus
    rows = []
    for i, l in enumerate(boundary.ell):
        rows.append([_fmt(l), _fmt(boundary.fplus[i]),
                     _fmt(fm[i]) if fm is not None else ""])
    _write_csv(args.out, ["ell", "phi_plus", "phi_minus"], rows)
    log.info("boundary table written to %s", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    model = model_from_dict(_load_json(args.model))
    measure = measure_from_dict(_load_json(args.measure))
    scale = _build_scale(model, measure,
                         {"x_max": args.x_max, "h": args.h}
                         if args.x_max else {"h": args.h})
    sim = {"dt": args.dt, "n_paths": args.paths}
    if args.seed is not None:
        sim["seed"] = args.seed
    if args.eps is not None:
        sim["eps"] = args.eps
    if args.t_max is not None:
        sim["t_max"] = args.t_max
    config = _sim_config(sim, measure, scale)
    _, result, rep = _simulate(model, measure, args.theorem, scale,
                               config, args.threads)
    report = rep.to_dict()
    report["theorem"] = args.theorem
    report["seed"] = config.seed
    _write_report(args.out, report)
    if args.samples:
        _write_samples(args.samples, result)
    log.info("simulation report written to %s", args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    measure = measure_from_dict(_load_json(args.measure))
    with open(args.samples, newline="") as fh:
        rdr = csv.DictReader(fh)
        rows = list(rdr)
    xs = np.array([float(r["X_T"]) for r in rows])
    ls = np.array([float(r["L_T"]) for r in rows])
    censored = np.array([r["censored"] == "1" for r in rows])
    keep = ~censored
    from .montecarlo import ks_distance
    report = {
        "n_paths": len(rows),
        "n_censored": int(censored.sum()),
        "censor_rate": float(censored.mean()) if len(rows) else 0.0,
        "ks": float(ks_distance(xs[keep], measure)),
        "mean_x": float(xs[keep].mean()),
        "mean_target": float(measure.mean()),
        "mean_se": float(xs[keep].std() / math.sqrt(max(keep.sum(), 1))),
        "mean_l": float(ls[keep].mean()),
    }
    _write_report(args.out, report)
    log.info("validation report written to %s", args.out)
    return EXIT_OK


def cmd_run(args) -> int:
    scenario = _load_json(args.scenario)
    if not isinstance(scenario, dict):
        raise DomainError("scenario must be a JSON object")
    extra = set(scenario) - _SCENARIO_KEYS
    if extra:
        raise DomainError(f"unknown scenario keys: {sorted(extra)}")
    for key in ("model", "measure", "theorem"):
        if key not in scenario:
            raise DomainError(f"scenario is missing the {key!r} key")
    theorem = scenario["theorem"]
    if theorem not in _BUILDERS:
        raise DomainError("theorem must be 1, 2 or 3")
    scale_params = scenario.get("scale", {})
    if set(scale_params) - _SCALE_KEYS:
        raise DomainError("unknown scale keys")
    checks = scenario.get("checks", {})
    if set(checks) - _CHECK_KEYS:
        raise DomainError("unknown check keys")

    model = model_from_dict(scenario["model"])
    measure = measure_from_dict(scenario["measure"])
    scale = _build_scale(model, measure, scale_params)
    config = _sim_config(scenario.get("sim", {}), measure, scale,
                         seed_override=args.seed)

    out = args.out_dir
    os.makedirs(out, exist_ok=True)

    step = scale.x_max / 512.0
    xs = np.arange(0.0, scale.x_max + step / 2, step)
    _write_csv(os.path.join(out, "scale_table.csv"),
               ["x", "W", "W_prime"],
               ([_fmt(x), _fmt(scale.w(x)), _fmt(scale.w_prime(x))]
                for x in xs))

    xlaw = ExcursionLaw(scale)
    heights = xs[1:-1]
    _write_csv(os.path.join(out, "excursion_table.csv"),
               ["a", "n_sup_ge", "n_inf_le",
                "n_signed_max_up", "n_signed_max_down"],
               ([_fmt(a), _fmt(xlaw.n_sup_ge(a)), _fmt(xlaw.n_inf_le(a)),
                 _fmt(xlaw.n_signed_max(a)[0]),
                 _fmt(xlaw.n_signed_max(a)[1])] for a in heights))

    boundary, result, rep = _simulate(model, measure, theorem, scale,
                                      config, args.threads)
    fm = boundary.fminus
    _write_csv(os.path.join(out, "boundary.csv"),
               ["ell", "phi_plus", "phi_minus"],
               ([_fmt(l), _fmt(boundary.fplus[i]),
                 _fmt(fm[i]) if fm is not None else ""]
                for i, l in enumerate(boundary.ell)))
    _write_samples(os.path.join(out, "samples.csv"), result)

    report = rep.to_dict()
    report.update({"theorem": theorem, "seed": config.seed,
                   "backend": backend_name()})
    passed = True
    censor_max = float(checks.get("censor_max", 0.01))
    if rep.censor_rate > censor_max:
        passed = False
    if "ks_max" in checks and rep.ks > float(checks["ks_max"]):
        passed = False
    tol_se = float(checks.get("mean_tol_se", 4.0))
    if rep.mean_se > 0 and \
            abs(rep.mean_x - rep.mean_target) > tol_se * rep.mean_se:
        passed = False
    report["checks_passed"] = passed
    _write_report(os.path.join(out, "report.json"), report)
    log.info("scenario artifacts written to %s", out)
    if not passed:
        log.error("scenario checks failed; see report.json")
    return EXIT_OK if passed else 1


# ------------------------------------------------------------------ parser

def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="override the scenario/config seed")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--log-level", default="warning",
                        choices=["debug", "info", "warning", "error"])
    ap = argparse.ArgumentParser(
        prog="snlevy",
        parents=[common],
        description="Skorokhod-embedding boundaries for spectrally "
                    "negative Levy processes, with Monte Carlo checks")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scale-table", help="tabulate W and W'",
                       parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_scale_table)

    p = sub.add_parser("excursion-table",
                       help="tabulate excursion functionals",
                       parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--x-max", type=float, default=5.0)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--step", type=float, default=0.01)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_excursion_table)

    p = sub.add_parser("boundary", help="tabulate a stopping boundary",
                       parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--theorem", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_boundary)

    p = sub.add_parser("simulate", help="simulate a stopping rule",
                       parents=[common])
    p.add_argument("--model", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--theorem", type=int, required=True, choices=[1, 2, 3])
    p.add_argument("--paths", type=int, default=10000)
    p.add_argument("--dt", type=float, default=1e-5)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--x-max", type=float, default=None)
    p.add_argument("--h", type=float, default=1e-4)
    p.add_argument("--out", required=True)
    p.add_argument("--samples", default=None)
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("validate", help="re-validate a samples file",
                       parents=[common])
    p.add_argument("--samples", required=True)
    p.add_argument("--measure", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("run", help="run a full scenario",
                       parents=[common])
    p.add_argument("--scenario", required=True)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(fn=cmd_run)
    return ap


def main(argv=None) -> int:
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        # argparse uses exit code 2 for usage errors, which collides
        # with the inadmissible-target code
        return EXIT_USAGE if exc.code not in (0, None) else 0
    logging.basicConfig(level=args.log_level.upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.fn(args)
    except AdmissibilityError as exc:
        log.error("target not admissible: %s (lhs=%s rhs=%s)",
                  exc, exc.lhs, exc.rhs)
        return EXIT_INADMISSIBLE
    except (NumericError, UnsupportedError) as exc:
        log.error("numeric failure: %s", exc)
        return EXIT_NUMERIC
    except (DomainError, json.JSONDecodeError, FileNotFoundError,
            KeyError, TypeError, ValueError) as exc:
        log.error("usage error: %s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
