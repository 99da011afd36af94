import subprocess
import sys
from pathlib import Path

import pytest

from driftplots.histogram import HistogramSpec, SchemaError, main as hist_main, plot_histogram
from driftplots.tvd_curves import main as tvd_main, plot_tvd


def _primary_cli(*argv):
    return subprocess.run(
        [sys.executable, "-m", "paulidrift", *argv], capture_output=True, text=True
    )


@pytest.fixture(scope="module")
def fig4_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig4")
    result = _primary_cli("simulate", "--preset", "fig4", "--seed", "0", "--out", str(out))
    assert result.returncode == 0, result.stderr
    return out


@pytest.fixture(scope="module")
def fig9_dir(tmp_path_factory):
    out = tmp_path_factory.mktemp("fig9")
    result = _primary_cli("simulate", "--preset", "fig9", "--seed", "0", "--out", str(out))
    assert result.returncode == 0, result.stderr
    return out


class TestHistogram:
    def test_renders_png_from_simulation_csv(self, fig4_dir, tmp_path):
        out = tmp_path / "rates.png"
        assert hist_main(["--in", str(fig4_dir / "histogram.csv"), "--out", str(out)]) == 0
        assert out.stat().st_size > 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_renders_svg(self, fig4_dir, tmp_path):
        out = tmp_path / "rates.svg"
        assert hist_main(["--in", str(fig4_dir / "histogram.csv"), "--out", str(out)]) == 0
        assert b"<svg" in out.read_bytes()[:300]

    def test_single_row_renders(self, tmp_path):
        csv_path = tmp_path / "one.csv"
        csv_path.write_text(
            "label,prior,updated,physical,stddev\nI,0.9,0.91,0.92,0.01\n"
        )
        out = tmp_path / "one.png"
        plot_histogram(HistogramSpec(csv_path, out))
        assert out.exists()

    def test_missing_column_is_schema_error(self, tmp_path, capsys):
        csv_path = tmp_path / "bad.csv"
        csv_path.write_text("label,prior,updated\nI,0.9,0.91\n")
        assert hist_main(["--in", str(csv_path), "--out", str(tmp_path / "x.png")]) == 1
        assert "missing columns" in capsys.readouterr().err

    def test_identical_columns_render(self, tmp_path):
        rows = ["label,prior,updated,physical,stddev"]
        rows += [f"P{i},0.25,0.25,0.25,0.0" for i in range(4)]
        csv_path = tmp_path / "flat.csv"
        csv_path.write_text("\n".join(rows) + "\n")
        out = tmp_path / "flat.png"
        plot_histogram(HistogramSpec(csv_path, out))
        assert out.exists()


class TestTvdCurves:
    def test_four_curve_figure_from_simulation(self, fig9_dir, tmp_path):
        curves = sorted(fig9_dir.glob("curve_p*.csv"))
        assert len(curves) == 4
        out = tmp_path / "tvd.png"
        assert tvd_main(["--in", *map(str, curves), "--out", str(out)]) == 0
        assert out.stat().st_size > 0

    def test_svg_output(self, fig9_dir, tmp_path):
        curves = sorted(fig9_dir.glob("curve_p*.csv"))
        out = tmp_path / "tvd.svg"
        assert tvd_main(["--in", *map(str, curves), "--out", str(out)]) == 0
        assert b"<svg" in out.read_bytes()[:300]

    def test_single_point_curves_use_markers(self, tmp_path):
        path = tmp_path / "tiny.csv"
        path.write_text("n,tvd,rule,p,seed\n0,0.08,exact_maximal,0,1\n")
        out = tmp_path / "tiny.png"
        plot_tvd([path], out)
        assert out.exists()

    def test_empty_file_errors_nonzero(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        path.write_text("n,tvd,rule,p,seed\n")
        assert tvd_main(["--in", str(path), "--out", str(tmp_path / "x.png")]) == 1
        assert "no data rows" in capsys.readouterr().err

    def test_schema_mismatch_errors(self, tmp_path, capsys):
        path = tmp_path / "bad.csv"
        path.write_text("steps,distance\n1,0.5\n")
        assert tvd_main(["--in", str(path), "--out", str(tmp_path / "x.png")]) == 1
        assert "missing columns" in capsys.readouterr().err
