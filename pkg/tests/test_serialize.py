import csv
import io
import json

import numpy as np
import pytest

from cvqkdpy.analysis import SweepPoint, SweepResult
from cvqkdpy.errors import CVQKDError
from cvqkdpy.protocols import KeyRateReport
from cvqkdpy.utils.serialize import (
    clamp_rate,
    point_row,
    render_results,
    report_to_text,
    results_from_json,
    results_to_csv,
    results_to_gnuplot,
    results_to_json,
    write_text,
)


def random_report(rng):
    eig = tuple(sorted(1.0 + rng.exponential(5.0, size=4), reverse=True))
    return KeyRateReport.build(
        rng.uniform(0.0, 1.0), rng.uniform(0.0, 6.0), rng.uniform(0.0, 6.0), eig, eig[1:], rng.uniform(0.8, 1.0),
        mu=rng.normal(),
    )


def random_result(rng, curve, n=6, noise=False):
    points = []
    for x in np.sort(rng.uniform(0.0, 200.0, size=n)):
        extra = {"eps_tolerable": float(rng.uniform(0.0, 0.1)), "in_range": bool(rng.random() < 0.8)} if noise else {}
        points.append(
            SweepPoint(float(x), random_report(rng), float(rng.uniform(0.01, 1.0)), 1.0, float(rng.uniform(0.01, 1.0)), **extra)
        )
    return SweepResult("distance-km", curve, tuple(points), {"scheme": curve, "beta": 0.95})


class TestClamp:
    def test_tiny_rate_is_clamped(self):
        assert clamp_rate(1e-310) == (0.0, True)
        assert clamp_rate(-1e-305) == (0.0, True)

    def test_zero_and_normal_rates_pass(self):
        assert clamp_rate(0.0) == (0.0, False)
        assert clamp_rate(1e-299) == (1e-299, False)
        assert clamp_rate(-0.3) == (-0.3, False)

    def test_clamped_row(self):
        report = KeyRateReport.build(1e-200, 1e-100, 0.0, [1.0], [1.0], 1.0)
        row = point_row(SweepPoint(5.0, report))
        assert row["k_ps"] == 0.0
        assert row["clamped"] is True
        assert report.k_ps != 0.0


class TestJson:
    """JSON results parse back to the same doubles"""

    @pytest.mark.parametrize("seed", range(5))
    def test_round_trip_is_exact(self, seed):
        rng = np.random.default_rng(seed)
        curves = ["alice-k1", "original", "bob-k2", "both-k1", "gg02"]
        # 200 curves per document, 1000 over the five seeds
        results = [
            random_result(rng, curves[i % len(curves)], n=int(rng.integers(1, 9)), noise=bool(rng.random() < 0.5))
            for i in range(200)
        ]
        metadata = {"command": "sweep", "overrides": {"protocol.eps": float(rng.uniform(0.0, 0.1))}}
        parsed, parsed_metadata = results_from_json(results_to_json(results, metadata))
        assert parsed == results
        assert parsed_metadata == metadata

    def test_extreme_doubles_survive(self):
        rng = np.random.default_rng(99)
        for _ in range(1000):
            scale = 10.0 ** float(rng.integers(-300, 300))
            report = KeyRateReport.build(rng.uniform(), scale * rng.uniform(), scale * rng.uniform(), [1.0], [1.0], 0.95)
            result = SweepResult("eps", "original", (SweepPoint(float(rng.uniform()), report),), {})
            assert results_from_json(results_to_json([result]))[0] == [result]

    def test_rejects_other_documents(self):
        with pytest.raises(CVQKDError):
            results_from_json(json.dumps({"rows": []}))
        with pytest.raises(CVQKDError):
            results_from_json("not json")


class TestCsv:
    def test_agrees_with_json(self):
        rng = np.random.default_rng(11)
        results = [random_result(rng, "alice-k1"), random_result(rng, "gg02", n=3)]
        rows = list(csv.DictReader(io.StringIO(results_to_csv(results))))
        points = [p for curve in json.loads(results_to_json(results))["curves"] for p in curve["points"]]
        assert len(rows) == len(points) == 9
        for row, point in zip(rows, points):
            assert float(row["parameter"]) == point["parameter"]
            assert float(row["k_ps"]) == point["k_ps"]
            assert float(row["holevo"]) == point["holevo"]
        assert [r["curve"] for r in rows] == ["alice-k1"] * 6 + ["gg02"] * 3

    def test_noise_columns_only_when_present(self):
        rng = np.random.default_rng(3)
        plain = results_to_csv([random_result(rng, "original")]).splitlines()[0]
        noisy = results_to_csv([random_result(rng, "original", noise=True)]).splitlines()[0]
        assert "eps_tolerable" not in plain
        assert noisy.split(",")[-3:] == ["eps_tolerable", "in_range", "curve"]


class TestGnuplot:
    def test_one_block_per_curve(self):
        rng = np.random.default_rng(5)
        text = results_to_gnuplot([random_result(rng, "alice-k1"), random_result(rng, "bob-k1")])
        blocks = text.rstrip("\n").split("\n\n\n")
        assert len(blocks) == 2
        assert blocks[0].startswith("# curve: alice-k1")
        assert blocks[1].startswith("# curve: bob-k1")
        assert len(blocks[0].splitlines()) == 3 + 6

    def test_missing_noise_is_nan(self):
        rng = np.random.default_rng(8)
        noisy = random_result(rng, "alice-k1", n=2, noise=True)
        plain = random_result(rng, "original", n=2)
        text = results_to_gnuplot([noisy, plain])
        last_block = text.rstrip("\n").split("\n\n\n")[1]
        assert last_block.splitlines()[-1].split()[-2:] == ["nan", "1"]

    def test_render_dispatch(self):
        rng = np.random.default_rng(9)
        results = [random_result(rng, "original", n=2)]
        assert render_results(results, "gnuplot") == results_to_gnuplot(results)
        with pytest.raises(ValueError):
            render_results(results, "xml")


class TestReportText:
    report = KeyRateReport.build(0.5, 2.0, 1.5, [3.0, 1.0], [2.0], 0.95, mu=0.4)

    def test_csv(self):
        header, values = report_to_text(self.report, "csv").splitlines()
        columns = header.split(",")
        assert "eig_unconditional" not in columns
        assert dict(zip(columns, values.split(",")))["k_ps"] == repr(0.5 * (0.95 * 2.0 - 1.5))

    def test_json_keeps_spectra(self):
        document = json.loads(report_to_text(self.report, "json", {"scheme": "alice-k1"}))
        assert document["report"]["eig_unconditional"] == [3.0, 1.0]
        assert document["metadata"] == {"scheme": "alice-k1"}

    def test_gnuplot(self):
        header, values = report_to_text(self.report, "gnuplot").splitlines()
        assert header.startswith("# p_success")
        assert len(header.split()) == len(values.split()) + 1

    def test_unknown_format(self):
        with pytest.raises(ValueError):
            report_to_text(self.report, "yaml")


class TestWriteText:
    def test_to_file(self, tmp_path):
        path = tmp_path / "out.csv"
        write_text("a,b\n", str(path))
        assert path.read_text(encoding="utf-8") == "a,b\n"

    def test_to_stdout(self, capsys):
        write_text("no newline", None)
        assert capsys.readouterr().out == "no newline\n"

    def test_missing_directory(self, tmp_path):
        with pytest.raises(CVQKDError, match="cannot write"):
            write_text("x", str(tmp_path / "absent" / "out.csv"))
