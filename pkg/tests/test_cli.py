import csv
import json
import math
import shutil
from pathlib import Path

import pytest

from app.cli.main import main
from app.clients.curve_plot import BAND_ID, CHANCE_ID, PRED_ID, TRUTH_ID

Z_HALF = math.log(3.0) / 2.0
TARGETS = "60,30,20,10,5,1"


def _phi(t: float) -> float:
    return 0.5 * math.erfc(-t / math.sqrt(2.0))


def _rows(path: Path) -> list[dict[str, str]]:
    with path.open(newline="", encoding="utf-8") as f:
        return list(csv.DictReader(f))


@pytest.fixture
def fixture_csv(data_dir, tmp_path) -> Path:
    for name in ("labeled_small.csv", "labeled_small.meta.json"):
        shutil.copy(data_dir / name, tmp_path / name)
    return tmp_path / "labeled_small.csv"


def _predict(src: Path, out: Path, *extra: str) -> int:
    return main(["predict", str(src), "--out", str(out), "--n-boot", "200", "--seed", "5", *extra])


class TestPredict:
    def test_golden_fixture(self, fixture_csv, tmp_path):
        out = tmp_path / "curve.csv"
        assert _predict(fixture_csv, out) == 0

        rows = _rows(out)
        assert list(rows[0]) == ["window_s", "accuracy_pct", "ci_low_pct", "ci_high_pct"]
        assert [float(r["window_s"]) for r in rows] == [60, 30, 20, 10, 5, 1]
        baseline = next(r for r in rows if float(r["window_s"]) == 20.0)
        expected = 100.0 * _phi(0.75 / math.sqrt(5.5 / 7.0))
        assert float(baseline["accuracy_pct"]) == pytest.approx(expected, rel=1e-11)
        for r in rows:
            assert float(r["ci_low_pct"]) <= float(r["accuracy_pct"]) <= float(r["ci_high_pct"])

        report = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
        assert set(report) == {"config", "model", "curve", "warnings"}
        model = report["model"]
        assert model["mu_diff"] == pytest.approx(0.75 * Z_HALF, rel=1e-12)
        assert model["sigma_sum_sq"] == pytest.approx(5.5 / 7.0 * Z_HALF**2, rel=1e-12)
        assert model["rho_att"] == pytest.approx(0.3125)
        assert model["rho_unatt"] == pytest.approx(-0.0625)
        assert (model["n_baseline"], model["m_count"]) == (1280, 8)
        assert report["config"]["n_boot"] == 200
        assert report["warnings"] == []

    def test_byte_identical_reruns(self, fixture_csv, tmp_path):
        out = tmp_path / "curve.csv"
        assert _predict(fixture_csv, out) == 0
        first = out.read_bytes(), out.with_suffix(".json").read_bytes()
        assert _predict(fixture_csv, out) == 0
        assert (out.read_bytes(), out.with_suffix(".json").read_bytes()) == first
        assert b"\r\n" not in first[0]

    def test_flags_override_sidecar(self, fixture_csv, tmp_path):
        out = tmp_path / "curve.csv"
        assert _predict(fixture_csv, out, "--fs", "20", "--targets", "20") == 0
        report = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
        assert report["model"]["n_baseline"] == 400

    def test_target_beyond_data_warns(self, fixture_csv, tmp_path):
        out = tmp_path / "curve.csv"
        assert _predict(fixture_csv, out, "--targets", "200,20") == 0
        report = json.loads(out.with_suffix(".json").read_text(encoding="utf-8"))
        assert len(report["warnings"]) == 1
        assert "200 s" in report["warnings"][0]

    def test_empty_csv(self, tmp_path):
        src = tmp_path / "empty.csv"
        src.write_text("", encoding="utf-8")
        out = tmp_path / "curve.csv"
        assert _predict(src, out, "--window-s", "20", "--fs", "64") == 2
        assert not out.exists()
        assert not out.with_suffix(".json").exists()

    def test_bad_value_names_row_and_column(self, tmp_path, capsys):
        src = tmp_path / "bad.csv"
        src.write_text("r_att,r_unatt\n0.2,0.1\n0.3,abc\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 2
        err = capsys.readouterr().err
        assert "row 3" in err and "r_unatt" in err

    def test_out_of_range_value(self, tmp_path):
        src = tmp_path / "bad.csv"
        src.write_text("r_att,r_unatt\n1.5,0.1\n0.3,0.2\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 2

    def test_extra_columns_ignored(self, tmp_path):
        src = tmp_path / "trials.csv"
        src.write_text("r_att,r_unatt,trial\n0.2,0.1,1\n0.3,0.0,1\n0.1,0.2,2\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 0

    def test_missing_metadata(self, tmp_path):
        src = tmp_path / "bare.csv"
        src.write_text("r_att,r_unatt\n0.2,0.1\n0.3,0.0\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv") == 2

    def test_missing_file(self, tmp_path):
        assert _predict(tmp_path / "nope.csv", tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 2

    def test_zero_variance_exit_code(self, tmp_path):
        src = tmp_path / "same.csv"
        src.write_text("r_att,r_unatt\n0.3,0.1\n0.3,0.1\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 3

    def test_too_few_pairs_exit_code(self, tmp_path):
        src = tmp_path / "one.csv"
        src.write_text("r_att,r_unatt\n0.3,0.1\n", encoding="utf-8")
        assert _predict(src, tmp_path / "curve.csv", "--window-s", "20", "--fs", "64") == 3

    @pytest.mark.parametrize("flags", [["--ci", "0.4"], ["--n-boot", "50"], ["--targets", "20,20"], ["--targets", "0"]])
    def test_invalid_flags(self, fixture_csv, tmp_path, flags):
        assert _predict(fixture_csv, tmp_path / "curve.csv", *flags) == 2

    def test_missing_out_is_usage_error(self, fixture_csv):
        with pytest.raises(SystemExit) as exc:
            main(["predict", str(fixture_csv)])
        assert exc.value.code == 2


def _simulate(out: Path, *extra: str) -> int:
    return main(
        [
            "simulate",
            "--out",
            str(out),
            "--rho-att",
            "0.2",
            "--rho-unatt",
            "0.05",
            "--fs",
            "20",
            "--window-s",
            "20",
            "--minutes",
            "30",
            "--seed",
            "3",
            *extra,
        ]
    )


class TestSimulate:
    def test_thirty_minutes(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert _simulate(out) == 0
        assert len(_rows(out)) == 90
        meta = json.loads((tmp_path / "sim.meta.json").read_text(encoding="utf-8"))
        assert (meta["window_s"], meta["fs_hz"]) == (20.0, 20.0)
        assert meta["scenario"]["rho_att"] == 0.2

    def test_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert _simulate(a) == 0 and _simulate(b) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_truth_files(self, tmp_path):
        out = tmp_path / "sim.csv"
        assert _simulate(out, "--truth-windows", "60,5", "--truth-minutes", "2") == 0
        assert len(_rows(tmp_path / "sim.w60.csv")) == 2
        assert len(_rows(tmp_path / "sim.w5.csv")) == 24

    def test_norm_constraint(self, tmp_path):
        code = main(
            [
                "simulate",
                "--out",
                str(tmp_path / "sim.csv"),
                "--rho-att",
                "0.9",
                "--rho-unatt",
                "0.5",
                "--fs",
                "20",
                "--window-s",
                "20",
                "--minutes",
                "30",
            ]
        )
        assert code == 2
        assert not (tmp_path / "sim.csv").exists()

    def test_too_short(self, tmp_path):
        out = tmp_path / "sim.csv"
        code = main(
            [
                "simulate",
                "--out",
                str(out),
                "--rho-att",
                "0.2",
                "--rho-unatt",
                "0.05",
                "--fs",
                "20",
                "--window-s",
                "60",
                "--minutes",
                "0.5",
            ]
        )
        assert code == 2

    def test_missing_window(self, tmp_path):
        code = main(
            ["simulate", "--out", str(tmp_path / "s.csv"), "--rho-att", "0.2", "--rho-unatt", "0.05", "--minutes", "5"]
        )
        assert code == 2


@pytest.fixture
def pipeline(tmp_path):
    """simulate -> predict on a small reference run; returns (curve csv, truth csv paths)."""
    sim = tmp_path / "sim.csv"
    assert _simulate(sim, "--truth-windows", TARGETS, "--truth-minutes", "10") == 0
    curve = tmp_path / "curve.csv"
    assert _predict(sim, curve) == 0
    truth = [tmp_path / f"sim.w{w}.csv" for w in TARGETS.split(",")]
    return curve, truth


class TestEvaluate:
    def test_end_to_end(self, pipeline, tmp_path):
        curve, truth = pipeline
        out = tmp_path / "eval.json"
        assert main(["evaluate", str(curve), "--out", str(out), "--truth", ",".join(map(str, truth))]) == 0

        report = json.loads(out.read_text(encoding="utf-8"))
        assert set(report) == {"config", "aggregate", "sets", "summary"}
        assert report["aggregate"] == "per-set"
        (block,) = report["sets"]
        assert [row["window_s"] for row in block["table"]] == [60, 30, 20, 10, 5, 1]
        assert set(block["table"][0]) == {"window_s", "true_pct", "pred_pct"}
        assert 0.0 <= block["mae_pp"] and 0.0 <= block["coverage_pct"] <= 100.0

    def test_mean_aggregate(self, pipeline, tmp_path):
        curve, truth = pipeline
        out = tmp_path / "eval.json"
        group = ",".join(map(str, truth))
        args = ["evaluate", str(curve), str(curve), "--out", str(out), "--truth", group, "--truth", group]
        assert main([*args, "--aggregate", "mean"]) == 0
        report = json.loads(out.read_text(encoding="utf-8"))
        assert report["sets"] == []
        assert len(report["summary"]["per_point"]) == 6

    def test_grid_mismatch(self, pipeline, tmp_path, capsys):
        curve, truth = pipeline
        out = tmp_path / "eval.json"
        partial = ",".join(str(p) for p in truth if ".w5." not in p.name)
        assert main(["evaluate", str(curve), "--out", str(out), "--truth", partial]) == 2
        assert "5 s" in capsys.readouterr().err
        assert not out.exists()

    def test_missing_truth_file(self, pipeline, tmp_path):
        curve, _ = pipeline
        code = main(["evaluate", str(curve), "--out", str(tmp_path / "e.json"), "--truth", str(tmp_path / "x.csv")])
        assert code == 2


class TestPlot:
    def test_structure(self, pipeline, tmp_path):
        curve, truth = pipeline
        svg = tmp_path / "curve.svg"
        assert main(["plot", str(curve), "--out", str(svg), "--truth", ",".join(map(str, truth))]) == 0
        text = svg.read_text(encoding="utf-8")
        assert text.lstrip().startswith("<?xml")
        for gid in (PRED_ID, TRUTH_ID, BAND_ID, CHANCE_ID):
            assert text.count(f'id="{gid}"') == 1
        assert ">45<" in text and ">50<" in text

    def test_byte_identical(self, pipeline, tmp_path):
        curve, _ = pipeline
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        assert main(["plot", str(curve), "--out", str(a)]) == 0
        assert main(["plot", str(curve), "--out", str(b), "--log-x"]) == 0
        assert main(["plot", str(curve), "--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
        assert TRUTH_ID not in a.read_text(encoding="utf-8")

    def test_degenerate_band(self, tmp_path):
        src = tmp_path / "flat.csv"
        src.write_text(
            "window_s,accuracy_pct,ci_low_pct,ci_high_pct\n60,90,90,90\n10,80,80,80\n1,60,60,60\n",
            encoding="utf-8",
        )
        svg = tmp_path / "flat.svg"
        assert main(["plot", str(src), "--out", str(svg)]) == 0
        assert f'id="{BAND_ID}"' in svg.read_text(encoding="utf-8")

    def test_reads_stored_curve(self, data_dir, tmp_path):
        svg = tmp_path / "small.svg"
        assert main(["plot", str(data_dir / "curve_small.csv"), "--out", str(svg), "--log-x"]) == 0
        assert svg.stat().st_size > 0

    def test_malformed_curve(self, tmp_path):
        src = tmp_path / "bad.csv"
        src.write_text("window_s,accuracy_pct\n60,90\n", encoding="utf-8")
        assert main(["plot", str(src), "--out", str(tmp_path / "bad.svg")]) == 2
