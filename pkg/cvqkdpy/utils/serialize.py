"""
Result emitters: CSV, JSON and gnuplot data blocks.

Floats are written with ``repr`` so every value parses back to the same
double. Rates with magnitude below 1e-300 are written as 0 and flagged in
the ``clamped`` column.
"""

import csv
import io
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from ..analysis import SweepPoint, SweepResult
from ..errors import CVQKDError
from ..protocols import KeyRateReport

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "gnuplot")
CLAMP_BELOW = 1e-300
COLUMNS = ("parameter", "k_ps", "p_success", "mutual_info", "holevo", "t_ps_used", "clamped")
NOISE_COLUMNS = ("eps_tolerable", "in_range")


def clamp_rate(rate: float) -> Tuple[float, bool]:
    if rate != 0.0 and abs(rate) < CLAMP_BELOW:
        return 0.0, True
    return rate, False


def _fmt(value: Any) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _has_noise(results: Sequence[SweepResult]) -> bool:
    return any(p.eps_tolerable is not None for r in results for p in r.points)


def point_row(point: SweepPoint, with_noise: bool = False) -> Dict[str, Any]:
    k_ps, clamped = clamp_rate(point.report.k_ps)
    row: Dict[str, Any] = {
        "parameter": point.parameter,
        "k_ps": k_ps,
        "p_success": point.report.p_success,
        "mutual_info": point.report.mutual_info,
        "holevo": point.report.holevo,
        "t_ps_used": point.t_ps_used,
        "clamped": clamped,
    }
    if with_noise:
        row["eps_tolerable"] = point.eps_tolerable
        row["in_range"] = point.in_range
    return row


def results_to_csv(results: Sequence[SweepResult]) -> str:
    with_noise = _has_noise(results)
    columns = list(COLUMNS) + (list(NOISE_COLUMNS) if with_noise else []) + ["curve"]
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for result in results:
        for point in result.points:
            row = point_row(point, with_noise)
            row["curve"] = result.curve
            writer.writerow([_fmt(row[c]) for c in columns])
    return buffer.getvalue()


def results_to_gnuplot(results: Sequence[SweepResult]) -> str:
    """One block per curve, separated by two blank lines so ``index`` selects curves"""
    with_noise = _has_noise(results)
    columns = list(COLUMNS) + (list(NOISE_COLUMNS) if with_noise else [])
    blocks = []
    for result in results:
        lines = [f"# curve: {result.curve}", f"# axis: {result.axis}", "# " + " ".join(columns)]
        for point in result.points:
            row = point_row(point, with_noise)
            lines.append(" ".join(_fmt(row[c]) if row[c] is not None else "nan" for c in columns))
        blocks.append("\n".join(lines))
    return "\n\n\n".join(blocks) + "\n"


def results_to_json(results: Sequence[SweepResult], metadata: Optional[Mapping[str, Any]] = None) -> str:
    with_noise = _has_noise(results)
    curves = []
    for result in results:
        points = []
        for point in result.points:
            row = point_row(point, with_noise)
            row["t_ps_alice"] = point.t_ps_alice
            row["t_ps_bob"] = point.t_ps_bob
            row["eps_tolerable"] = point.eps_tolerable
            row["in_range"] = point.in_range
            row["report"] = point.report.to_dict()
            points.append(row)
        curves.append({"curve": result.curve, "axis": result.axis, "metadata": result.metadata, "points": points})
    return json.dumps({"metadata": dict(metadata or {}), "curves": curves}, indent=2)


def _report_from_dict(data: Mapping[str, Any]) -> KeyRateReport:
    return KeyRateReport(
        p_success=data["p_success"],
        mutual_info=data["mutual_info"],
        holevo=data["holevo"],
        eig_unconditional=tuple(data["eig_unconditional"]),
        eig_conditional=tuple(data["eig_conditional"]),
        k_s=data["k_s"],
        k_ps=data["k_ps"],
        beta=data["beta"],
        mu=data.get("mu", 0.0),
    )


def results_from_json(text: str) -> Tuple[List[SweepResult], Dict[str, Any]]:
    """Inverse of :func:`results_to_json`"""
    try:
        document = json.loads(text)
        results = []
        for curve in document["curves"]:
            points = tuple(
                SweepPoint(
                    parameter=p["parameter"],
                    report=_report_from_dict(p["report"]),
                    t_ps_alice=p["t_ps_alice"],
                    t_ps_bob=p["t_ps_bob"],
                    t_ps_used=p["t_ps_used"],
                    eps_tolerable=p["eps_tolerable"],
                    in_range=p["in_range"],
                )
                for p in curve["points"]
            )
            results.append(SweepResult(curve["axis"], curve["curve"], points, curve["metadata"]))
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise CVQKDError(f"not a sweep result document: {exc}") from exc
    return results, document.get("metadata", {})


def report_to_text(report: KeyRateReport, fmt: str, metadata: Optional[Mapping[str, Any]] = None) -> str:
    """Single key-rate evaluation in the requested format"""
    data = report.to_dict()
    if fmt == "json":
        return json.dumps({"metadata": dict(metadata or {}), "report": data}, indent=2)
    k_ps, clamped = clamp_rate(report.k_ps)
    data["k_ps"] = k_ps
    data["clamped"] = clamped
    scalars = [k for k, v in data.items() if not isinstance(v, list)]
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(scalars)
        writer.writerow([_fmt(data[k]) for k in scalars])
        return buffer.getvalue()
    if fmt == "gnuplot":
        return "# " + " ".join(scalars) + "\n" + " ".join(_fmt(data[k]) for k in scalars) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def render_results(results: Sequence[SweepResult], fmt: str, metadata: Optional[Mapping[str, Any]] = None) -> str:
    if fmt == "csv":
        return results_to_csv(results)
    if fmt == "json":
        return results_to_json(results, metadata)
    if fmt == "gnuplot":
        return results_to_gnuplot(results)
    raise ValueError(f"unknown format {fmt!r}")


def write_text(text: str, path: Optional[str]) -> None:
    """Write to ``path``, or to standard output when no path is given"""
    if path is None:
        print(text, end="" if text.endswith("\n") else "\n")
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CVQKDError(f"cannot write results to {path}: {exc.strerror or exc}") from exc
    logger.info("wrote %s", path)
