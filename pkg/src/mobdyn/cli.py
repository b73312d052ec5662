"""Command-line front end: scenario ingestion, experiment orchestration, and
report emission (report.json, gauge.csv / trajectory.csv, and figures).

Exit codes: 0 = analysis computed (including "fails" and "out_of_scope"
verdicts), 2 = malformed input (the message names the offending field),
3 = internal basis disagreement between the algebraic and dynamical routes.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from .batteries import BATTERIES, run_battery
from .config import DEFAULTS, VerdictConfig
from .equibaire import (
    FLOW,
    ITERATES,
    BasisDisagreementError,
    CollapseCertificate,
    FamilySpec,
    GaugeEstimate,
    certify_linear_bound,
    estimate_gauge,
    flow_verdict,
    iterates_verdict,
    probe_density_error,
)
from .flows import flow_trajectory
from .moebius import (
    HYPERBOLIC,
    LOXODROMIC,
    classify,
    fixed_points,
    iterate_orbit,
    loxodromic_normal_form,
)
from .serialize import (
    WireError,
    complex_to_wire,
    gauge_to_wire,
    json_dumps,
    linear_bound_to_wire,
    map_to_wire,
    parse_generator,
    parse_map,
    parse_point,
    point_to_wire,
    report_to_wire,
)
from .sphere import SpherePoint, chordal_distance, fibonacci_grid

EXPERIMENTS = (
    "classify",
    "fixpoints",
    "normalize",
    "orbit",
    "flow",
    "gauge",
    "verdict1",
    "verdict2",
    "approx-seq",
)
MAP_EXPERIMENTS = {"classify", "fixpoints", "normalize", "orbit", "verdict1"}
GENERATOR_EXPERIMENTS = {"flow", "verdict2", "approx-seq"}

_COMMON_PARAMS = {"seed", "workers"}
_ALLOWED_PARAMS = {
    "classify": _COMMON_PARAMS,
    "fixpoints": _COMMON_PARAMS,
    "normalize": _COMMON_PARAMS,
    "orbit": _COMMON_PARAMS | {"x", "n_max"},
    "flow": _COMMON_PARAMS | {"x", "times", "t_max", "sample_count"},
    "gauge": _COMMON_PARAMS
    | {"x", "radii", "samples_per_ball", "n_max", "t_max", "sample_count"},
    "verdict1": _COMMON_PARAMS | {"x", "radii", "samples_per_ball", "n_max"},
    "verdict2": _COMMON_PARAMS | {"grid_size", "cross_check"},
    "approx-seq": _COMMON_PARAMS | {"m_max", "grid_size", "probe_count"},
}


def _require_number(params: dict, key: str, kind, default):
    if key not in params:
        return default
    v = params[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise WireError(f"parameters.{key}", f"expected a number, got {v!r}")
    return kind(v)


def _load_scenario(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            scenario = json.load(fh)
    except FileNotFoundError:
        raise WireError("scenario", f"file not found: {path}")
    except json.JSONDecodeError as exc:
        raise WireError("scenario", f"invalid JSON in {path}: {exc}")
    if not isinstance(scenario, dict):
        raise WireError("scenario", "top level must be a JSON object")
    return scenario


def _validate_scenario(scenario: dict) -> tuple[str, dict]:
    allowed_top = {"experiment", "map", "generator", "parameters"}
    for key in scenario:
        if key not in allowed_top:
            raise WireError(key, "unknown field")
    if "experiment" not in scenario:
        raise WireError("experiment", "missing field")
    experiment = scenario["experiment"]
    if experiment not in EXPERIMENTS:
        raise WireError(
            "experiment", f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}"
        )
    if experiment in MAP_EXPERIMENTS:
        if "map" not in scenario:
            raise WireError("map", f"experiment {experiment!r} needs a map payload")
        if "generator" in scenario:
            raise WireError("generator", f"experiment {experiment!r} takes no generator")
    elif experiment in GENERATOR_EXPERIMENTS:
        if "generator" not in scenario:
            raise WireError("generator", f"experiment {experiment!r} needs a generator payload")
        if "map" in scenario:
            raise WireError("map", f"experiment {experiment!r} takes no map")
    else:  # gauge: exactly one payload decides the family kind
        have = [k for k in ("map", "generator") if k in scenario]
        if len(have) != 1:
            raise WireError("map", "gauge needs exactly one of 'map' or 'generator'")
    params = scenario.get("parameters", {})
    if not isinstance(params, dict):
        raise WireError("parameters", "must be an object")
    for key in params:
        if key not in _ALLOWED_PARAMS[experiment]:
            raise WireError(f"parameters.{key}", f"unknown parameter for {experiment!r}")
    return experiment, params


def _build_config(params: dict, args) -> VerdictConfig:
    layers: list[dict] = [{}]
    scenario_layer = {
        k: params[k]
        for k in ("seed", "workers", "radii", "samples_per_ball", "n_max", "t_max",
                  "sample_count", "grid_size", "cross_check", "m_max", "probe_count")
        if k in params
    }
    layers.append(scenario_layer)
    flag_layer: dict = {}
    if args.seed is not None:
        flag_layer["seed"] = args.seed
    if args.workers is not None:
        flag_layer["workers"] = args.workers
    if args.radii is not None:
        flag_layer["radii"] = args.radii
    if args.tmax is not None:
        flag_layer["t_max"] = args.tmax
    if args.nmax is not None:
        flag_layer["n_max"] = args.nmax
    if args.tolerance_overrides:
        flag_layer.update(args.tolerance_overrides)
    layers.append(flag_layer)
    try:
        return VerdictConfig.from_overrides(*layers)
    except KeyError as exc:
        raise WireError(str(exc.args[0]), "unknown configuration field")


def _parse_required_point(params: dict, experiment: str) -> SpherePoint:
    if "x" not in params:
        raise WireError("parameters.x", f"experiment {experiment!r} needs a base point x")
    return parse_point(params["x"], "parameters.x")


def _write_text(out_dir: str, name: str, text: str) -> str:
    path = os.path.join(out_dir, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return path


def _trajectory_csv(labels, points, limit) -> str:
    lines = ["t_or_n,re,im,is_inf,chordal_dist_to_limit"]
    for label, p in zip(labels, points):
        z = p.to_affine()
        dist = chordal_distance(p, limit) if limit is not None else 0.0
        lines.append(
            f"{label!r},{z.real!r},{z.imag!r},{int(p.is_infinity)},{dist!r}"
        )
    return "\n".join(lines) + "\n"


def _gauge_csv(g: GaugeEstimate) -> str:
    lines = ["r,S,S_over_r"]
    for r, s in zip(g.radii, g.s_values):
        lines.append(f"{r!r},{s!r},{s / r!r}")
    return "\n".join(lines) + "\n"


def _run_experiment(experiment: str, scenario: dict, params: dict,
                    config: VerdictConfig, out_dir: str, figures: bool) -> dict:
    """Returns the result document; writes CSV/figure artifacts as it goes."""
    artifacts: list[str] = []
    result: dict

    if experiment == "classify":
        f = parse_map(scenario["map"])
        cls = classify(f)
        result = {"class": cls.tag, "trace": complex_to_wire(cls.trace),
                  "map": map_to_wire(f)}

    elif experiment == "fixpoints":
        f = parse_map(scenario["map"])
        cls = classify(f)
        try:
            fp = fixed_points(f)
        except ValueError as exc:
            raise WireError("map", str(exc))
        residuals = [chordal_distance(f.apply(p), p) for p in fp.points]
        result = {
            "class": cls.tag,
            "fixed_points": [point_to_wire(p) for p in fp.points],
            "multipliers": list(fp.multipliers),
            "attracting": fp.attracting,
            "residuals": residuals,
        }

    elif experiment == "normalize":
        f = parse_map(scenario["map"])
        try:
            nf = loxodromic_normal_form(f)
        except ValueError as exc:
            raise WireError("map", str(exc))
        result = {
            "h": map_to_wire(nf.h),
            "lam": complex_to_wire(nf.lam),
            "abs_lam": abs(nf.lam),
            "attracting": point_to_wire(nf.attracting),
            "repelling": point_to_wire(nf.repelling),
        }

    elif experiment == "orbit":
        f = parse_map(scenario["map"])
        x = _parse_required_point(params, experiment)
        orbit = iterate_orbit(f, x, config.n_max)
        limit = None
        if classify(f).tag in (HYPERBOLIC, LOXODROMIC):
            fp = fixed_points(f)
            limit = fp.points[fp.attracting]
        else:
            limit = orbit[-1]
        labels = list(range(len(orbit)))
        artifacts.append(_write_text(out_dir, "trajectory.csv",
                                     _trajectory_csv(labels, orbit, limit)))
        if figures:
            from .figures import render_trajectory

            artifacts.append(render_trajectory(orbit, np.asarray(labels), limit,
                                               out_dir, x_label="step n"))
        result = {
            "length": len(orbit),
            "start": point_to_wire(orbit[0]),
            "end": point_to_wire(orbit[-1]),
            "limit": point_to_wire(limit),
            "final_distance_to_limit": chordal_distance(orbit[-1], limit),
        }

    elif experiment == "flow":
        A = parse_generator(scenario["generator"])
        x = _parse_required_point(params, experiment)
        if "times" in params:
            times = params["times"]
            if (not isinstance(times, list) or not times
                    or not all(isinstance(t, (int, float)) and not isinstance(t, bool)
                               for t in times)):
                raise WireError("parameters.times", "expected a nonempty list of numbers")
            times = [float(t) for t in times]
            if any(b < a for a, b in zip(times, times[1:])):
                raise WireError("parameters.times", "must be sorted ascending")
        else:
            times = list(np.linspace(0.0, config.t_max, config.sample_count))
        traj = flow_trajectory(A, x, times)
        limit = traj[-1]
        artifacts.append(_write_text(out_dir, "trajectory.csv",
                                     _trajectory_csv(times, traj, limit)))
        if figures:
            from .figures import render_trajectory

            artifacts.append(render_trajectory(traj, np.asarray(times), limit,
                                               out_dir, x_label="flow time t"))
        result = {
            "length": len(traj),
            "start": point_to_wire(traj[0]),
            "end": point_to_wire(traj[-1]),
            "times_head": times[:10],
        }

    elif experiment == "gauge":
        if "map" in scenario:
            src = parse_map(scenario["map"])
            family = FamilySpec(ITERATES, src, n_max=config.n_max)
        else:
            src = parse_generator(scenario["generator"])
            family = FamilySpec(FLOW, src, t_max=config.t_max,
                                sample_count=config.sample_count,
                                tail_times=config.flow_tail_times)
        x = _parse_required_point(params, experiment)
        try:
            gauge = estimate_gauge(
                family, x, config.radii,
                samples_per_ball=config.samples_per_ball, seed=config.seed,
                workers=config.workers, truncation_rel=config.truncation_rel,
                decay_window=config.decay_window, decay_slack=config.decay_slack,
            )
        except ValueError as exc:
            raise WireError("parameters.radii", str(exc))
        bound = certify_linear_bound(gauge, config.epsilon_floor, config.stability_factor)
        artifacts.append(_write_text(out_dir, "gauge.csv", _gauge_csv(gauge)))
        if figures:
            from .figures import render_gauge

            artifacts.append(render_gauge(gauge, out_dir))
        result = {"gauge": gauge_to_wire(gauge), "linear_bound": linear_bound_to_wire(bound)}

    elif experiment == "verdict1":
        f = parse_map(scenario["map"])
        x = _parse_required_point(params, experiment)
        report = iterates_verdict(f, x, config)
        if isinstance(report.evidence, GaugeEstimate):
            artifacts.append(_write_text(out_dir, "gauge.csv", _gauge_csv(report.evidence)))
            if figures:
                from .figures import render_gauge

                artifacts.append(render_gauge(report.evidence, out_dir))
        result = report_to_wire(report)

    elif experiment == "verdict2":
        A = parse_generator(scenario["generator"])
        K = fibonacci_grid(config.grid_size, config.seed)
        report = flow_verdict(A, K, config)
        if isinstance(report.evidence, CollapseCertificate) and figures:
            from .figures import render_collapse

            artifacts.append(render_collapse(report.evidence, out_dir))
        result = report_to_wire(report)

    else:  # approx-seq
        A = parse_generator(scenario["generator"])
        K = fibonacci_grid(config.grid_size, config.seed)
        try:
            density = probe_density_error(A, K, config.m_max,
                                          probe_count=config.probe_count,
                                          n_candidates=config.density_candidates)
        except ValueError as exc:
            raise WireError("generator", str(exc))
        if figures:
            from .figures import render_density

            artifacts.append(render_density(density, out_dir))
        result = {
            "m_max": config.m_max,
            "branch": density["branch"],
            "period": density["period"],
            "max_density_error": density["max_error"],
            "per_probe": density["per_probe"],
        }

    result["artifacts"] = [os.path.basename(a) for a in artifacts]
    return result


def cmd_run(args) -> int:
    try:
        scenario = _load_scenario(args.scenario)
        experiment, params = _validate_scenario(scenario)
        config = _build_config(params, args)
        out_dir = args.out
        os.makedirs(out_dir, exist_ok=True)
        result = _run_experiment(experiment, scenario, params, config,
                                 out_dir, args.figures)
    except WireError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except BasisDisagreementError as exc:
        print(f"internal basis disagreement: {exc}", file=sys.stderr)
        print(f"algebraic: {exc.algebraic}", file=sys.stderr)
        print(f"dynamical: {exc.dynamical}", file=sys.stderr)
        return 3

    report = {
        "schema": "mobdyn-report/1",
        "experiment": experiment,
        "scenario": scenario,
        "result": result,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }
    report_path = os.path.join(out_dir, "report.json")
    with open(report_path, "w", encoding="utf-8") as fh:
        fh.write(json_dumps(report))
    summary = result.get("verdict") or result.get("class") or "done"
    print(f"{experiment}: {summary}")
    print(f"report: {report_path}")
    for name in result["artifacts"]:
        print(f"artifact: {os.path.join(out_dir, name)}")
    return 0


def cmd_battery(args) -> int:
    if args.suite not in BATTERIES:
        print(
            f"error: field 'suite': unknown battery {args.suite!r}; "
            f"expected one of {sorted(BATTERIES)}",
            file=sys.stderr,
        )
        return 2
    ok = run_battery(args.suite)
    return 0 if ok else 1


def _parse_radii(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"radii must be comma-separated reals, got {text!r}")


def _parse_overrides(text: str) -> dict:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"tolerance overrides must be JSON: {exc}")
    if not isinstance(obj, dict):
        raise argparse.ArgumentTypeError("tolerance overrides must be a JSON object")
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mobdyn",
        description="Moebius-family dynamics on the Riemann sphere: "
        "classification, gauges, and equicontinuity verdicts.",
        epilog="CSV columns: gauge.csv is r,S,S_over_r; trajectory.csv is "
        "t_or_n,re,im,is_inf,chordal_dist_to_limit.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("scenario", help="path to the scenario JSON file")
    run.add_argument("--out", default=".", help="output directory (default: .)")
    run.add_argument("--workers", type=int, default=None,
                     help=f"worker-count hint (default {DEFAULTS['workers']})")
    run.add_argument("--seed", type=int, default=None,
                     help=f"sampling seed (default {DEFAULTS['seed']})")
    run.add_argument("--radii", type=_parse_radii, default=None,
                     help="descending comma-separated gauge radii")
    run.add_argument("--tmax", type=float, default=None,
                     help=f"flow time horizon (default {DEFAULTS['t_max']})")
    run.add_argument("--nmax", type=int, default=None,
                     help=f"iterate horizon (default {DEFAULTS['n_max']})")
    run.add_argument("--tolerance-overrides", type=_parse_overrides, default=None,
                     help='JSON object of config overrides, e.g. {"epsilon_floor": 1e-4}')
    run.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True,
                     help="render matplotlib figures next to the CSV output")
    run.set_defaults(func=cmd_run)

    battery = sub.add_parser("battery", help="run a built-in verification battery")
    battery.add_argument("suite", help=f"one of {sorted(BATTERIES)}")
    battery.set_defaults(func=cmd_battery)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
