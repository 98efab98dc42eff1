"""
Subcommand implementations. Each takes a validated :class:`RunConfig`
and returns the process exit code.
"""

import json
import logging
from typing import Any, Dict, List

from ..analysis import (
    Side,
    SweepResult,
    compare_schemes,
    max_distance,
    sweep_distance,
    sweep_eps,
    sweep_noise,
    sweep_photons,
    sweep_t_ps,
    tolerable_excess_noise,
)
from ..errors import ConfigError
from ..sources import oracle_triangle
from ..utils.serialize import render_results, report_to_text, write_text
from .config import RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NO_KEY = 2


def _emit_results(run: RunConfig, command: str, results: List[SweepResult]):
    fmt = run.output["format"]
    write_text(render_results(results, fmt, run.metadata(command)), run.output["path"])


def _emit_rows(run: RunConfig, command: str, rows: List[Dict[str, Any]]):
    """Flat tables (one row per scheme) in csv, json or gnuplot layout"""
    fmt = run.output["format"]
    if fmt == "json":
        text = json.dumps({"metadata": run.metadata(command), "rows": rows}, indent=2)
    else:
        columns = list(rows[0]) if rows else []
        render = [",".join(columns)] if fmt == "csv" else ["# " + " ".join(columns)]
        sep = "," if fmt == "csv" else " "
        for row in rows:
            render.append(sep.join(repr(v) if isinstance(v, float) else str(v) for v in row.values()))
        text = "\n".join(render) + "\n"
    write_text(text, run.output["path"])


def cmd_keyrate(run: RunConfig) -> int:
    scheme = run.scheme()
    forward, backward = run.channels()
    evaluation = run.experiment().evaluate_on(scheme, forward, backward)
    report = evaluation.report
    metadata = run.metadata("keyrate")
    metadata.update(
        {"scheme": scheme.name, "t1": forward.t, "t2": backward.t,
         "t_ps_alice": evaluation.t_ps_alice, "t_ps_bob": evaluation.t_ps_bob}
    )
    write_text(report_to_text(report, run.output["format"], metadata), run.output["path"])
    if report.k_ps > 0:
        logger.info("%s: K_PS = %.6g bits per use", scheme.name, report.k_ps)
        return EXIT_OK
    logger.warning("%s: no positive key (K_PS = %.6g)", scheme.name, report.k_ps)
    return EXIT_NO_KEY


def cmd_sweep(run: RunConfig) -> int:
    if run.sweep["quantity"] == "eps_tolerable":
        return cmd_noise(run)
    axis = run.sweep["axis"]
    values = run.sweep_values()
    experiment = run.experiment()
    threads = run.output["threads"]

    if axis == "k":
        ks = [int(v) for v in values]
        if any(k != v or k < 0 for k, v in zip(ks, values)):
            raise ConfigError("photon counts must be non-negative integers", key="sweep.values")
        results = [sweep_photons(experiment, Side(run.sweep["side"]), ks, run.distance_km(), threads)]
    elif axis == "distance-km":
        results = [sweep_distance(experiment, s, values, threads) for s in run.schemes()]
    elif axis == "eps":
        results = [sweep_eps(experiment, s, values, run.distance_km(), threads) for s in run.schemes()]
    else:
        results = [sweep_t_ps(experiment, s, values, run.distance_km(), threads) for s in run.schemes()]
    _emit_results(run, "sweep", results)
    return EXIT_OK


def cmd_noise(run: RunConfig) -> int:
    experiment = run.experiment()
    tol = run.optimizer["noise_tol"]
    optimize = run.optimizer["noise_optimize"]
    if run.sweep["values"] is not None or run.sweep["start"] is not None:
        values = run.sweep_values()
        results = [
            sweep_noise(experiment, s, values, tol, optimize, run.output["threads"]) for s in run.schemes()
        ]
        _emit_results(run, "noise", results)
        return EXIT_OK

    distance = run.distance_km()
    rows = []
    for scheme in run.schemes():
        limit = tolerable_excess_noise(experiment, scheme, distance, tol, optimize)
        rows.append(
            {"scheme": scheme.name, "distance_km": distance, "eps_tolerable": limit.eps,
             "in_range": limit.in_range, "t_ps_alice": limit.t_ps_alice, "t_ps_bob": limit.t_ps_bob}
        )
    _emit_rows(run, "noise", rows)
    return EXIT_OK if all(r["in_range"] for r in rows) else EXIT_NO_KEY


def cmd_optimize_tps(run: RunConfig) -> int:
    scheme = run.scheme()
    if scheme.side is Side.NONE:
        raise ConfigError("optimize-tps needs a scheme with photon subtraction", key="protocol.scheme")
    scheme = scheme.with_t_ps()
    forward, backward = run.channels()
    evaluation = run.experiment().evaluate_on(scheme, forward, backward)
    metadata = run.metadata("optimize-tps")
    metadata.update(
        {"scheme": scheme.name, "t_ps_alice": evaluation.t_ps_alice, "t_ps_bob": evaluation.t_ps_bob,
         "positive": evaluation.report.k_ps > 0}
    )
    write_text(report_to_text(evaluation.report, run.output["format"], metadata), run.output["path"])
    logger.info("%s: optimal T_PS alice=%.4f bob=%.4f", scheme.name, evaluation.t_ps_alice, evaluation.t_ps_bob)
    return EXIT_OK if evaluation.report.k_ps > 0 else EXIT_NO_KEY


def cmd_max_distance(run: RunConfig) -> int:
    experiment = run.experiment()
    o = run.optimizer
    rows = []
    for scheme in run.schemes():
        km = max_distance(experiment, scheme, o["rate_cutoff"], o["distance_tol_km"], o["max_distance_km"])
        rows.append({"scheme": scheme.name, "max_distance_km": km, "cutoff": o["rate_cutoff"]})
    _emit_rows(run, "max-distance", rows)
    return EXIT_OK if any(r["max_distance_km"] > 0 for r in rows) else EXIT_NO_KEY


def cmd_compare(run: RunConfig) -> int:
    results = compare_schemes(run.experiment(), run.sweep_values(), run.sweep["k"], run.output["threads"])
    _emit_results(run, "compare", list(results.values()))
    return EXIT_OK


def cmd_oracle_check(run: RunConfig) -> int:
    o = run.oracle
    checks = oracle_triangle(
        variances=o["variances"],
        t_ps_values=o["t_ps_values"],
        photon_counts=o["photon_counts"],
        fock_tol=o["fock_tol"],
        integral_tol=o["integral_tol"],
        grid=run.integration_grid(),
        fault=o["fault"],
    )
    rows = [
        {"v": c.v, "t_ps": c.t_ps, "k": c.k, "fock_deviation": c.fock_deviation,
         "integral_deviation": c.integral_deviation, "passed": c.passed}
        for c in checks
    ]
    _emit_rows(run, "oracle-check", rows)
    if not all(c.passed for c in checks):
        return EXIT_NO_KEY
    logger.info("all %d oracle cells passed", len(checks))
    return EXIT_OK


COMMANDS = {
    "keyrate": cmd_keyrate,
    "sweep": cmd_sweep,
    "optimize-tps": cmd_optimize_tps,
    "noise": cmd_noise,
    "max-distance": cmd_max_distance,
    "compare": cmd_compare,
    "oracle-check": cmd_oracle_check,
}
