import csv
import json
import subprocess
import sys

import pytest

from olgpaygo import cli


def _read(path):
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def test_series_tables(tmp_path):
    assert cli.main(["series", "--country", "all", "--out", str(tmp_path)]) == 0
    gamma = [r for r in _read(tmp_path / "table3.csv") if r["country"] == "Brazil"]
    assert [float(r["gamma"]) for r in gamma] == [4.42, 1.67, 1.61, 1.21, 1.14]
    assert (tmp_path / "raw_vs_canonical.csv").exists()


def test_series_constant_country(tmp_path):
    src = tmp_path / "flat.csv"
    src.write_text("country,t,H_millions,gdp_pc\n" + "".join(
        f"Flat,{t},5,100\n" for t in range(4)), encoding="utf-8")
    out = tmp_path / "out"
    assert cli.main(["series", "--country", "Flat", "--data", str(src), "--out", str(out)]) == 0
    assert {float(r["gamma"]) for r in _read(out / "table3.csv")} == {1.0}


def test_bounds_brazil(tmp_path, capsys):
    assert cli.main(["bounds", "--country", "Brazil", "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "bounds.csv")
    got = [float(r["theta_lower_bound"]) for r in rows]
    assert got == pytest.approx([1.50, 1.57, 1.56], abs=0.02)
    assert "Brazil" in capsys.readouterr().out


def test_bounds_without_old_age_income(tmp_path):
    assert cli.main(["bounds", "--phi", "0", "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "bounds.csv")
    assert all(r["published"] == "" for r in rows)


def test_tail_command(tmp_path):
    assert cli.main(["tail", "--a3", "0,0.5", "--out", str(tmp_path), "--format", "svg"]) == 0
    summary = _read(tmp_path / "tail.csv")[0]
    assert float(summary["a3_upper"]) == pytest.approx(2.43, abs=0.03)
    flat = [float(r["rate"]) for r in _read(tmp_path / "fig2.csv") if r["a3"] == "0.0"]
    assert flat == pytest.approx([1.14] * 20)
    assert (tmp_path / "fig2.svg").read_text().startswith("<svg")


def test_sweep_outputs_and_determinism(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["sweep", "--grid-step", "1e-3", "--out", str(a)]) == 0
    assert cli.main(["sweep", "--grid-step", "1e-3", "--out", str(b), "--jobs", "3"]) == 0
    for name in ("sweep.csv", "intervals.csv", "fig3.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()
    header = (a / "sweep.csv").read_text().splitlines()[0]
    assert header == "a3,feasible," + ",".join(f"r{t}" for t in range(9)) + ",stddev,max_residual"
    assert b"\r\n" not in (a / "sweep.csv").read_bytes()


def test_design_outputs(tmp_path):
    assert cli.main(["design", "--out", str(tmp_path), "--format", "svg"]) == 0
    rows = _read(tmp_path / "design.csv")
    assert list(rows[0]) == ["country", "generation", "s1", "s2", "s3", "sigma_paper",
                             "contribution_paid", "replacement"]
    assert len(rows) == 8
    balance = [r["relative_residual"] for r in _read(tmp_path / "balance.csv")]
    assert balance[:2] == ["", ""]
    assert max(abs(float(v)) for v in balance[2:]) < 1e-9
    fig4 = _read(tmp_path / "fig4.csv")
    assert [float(r["gamma"]) for r in fig4] == [4.42, 1.67, 1.61, 1.21, 1.14, 1.14, 1.14]
    assert (tmp_path / "fig4.svg").exists()


def test_json_format(tmp_path):
    assert cli.main(["bounds", "--format", "json", "--out", str(tmp_path)]) == 0
    records = json.loads((tmp_path / "bounds.json").read_text())
    assert records[0]["country"] == "Brazil"


def test_simple_command(tmp_path):
    assert cli.main(["simple", "--alpha", "2", "--out", str(tmp_path)]) == 0
    rows = _read(tmp_path / "sensitivity.csv")
    assert max(float(r["rel_error"]) for r in rows) < 1e-5
    trace = _read(tmp_path / "convergence.csv")
    assert float(trace[-1]["r1"]) == pytest.approx(2.0, abs=1e-10)


def test_config_file_and_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("country = Italy\nphi = 0.2\n", encoding="utf-8")
    assert cli.main(["bounds", "--config", str(cfg), "--out", str(tmp_path / "o")]) == 0
    assert _read(tmp_path / "o" / "bounds.csv")[0]["country"] == "Italy"
    assert cli.main(["bounds", "--config", str(cfg), "--country", "US",
                     "--out", str(tmp_path / "p")]) == 0
    assert _read(tmp_path / "p" / "bounds.csv")[0]["country"] == "US"


@pytest.mark.parametrize("text", ["colour = blue\n", "theta = abc\n", "theta = 0.5\n",
                                  "format = xml\n"])
def test_invalid_config_exit_code(tmp_path, text):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text(text, encoding="utf-8")
    assert cli.main(["bounds", "--config", str(cfg), "--out", str(tmp_path)]) == cli.EXIT_CONFIG


def test_ingestion_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("country,t,H_millions,gdp_pc\nA,0,-1,5\n", encoding="utf-8")
    code = cli.main(["series", "--data", str(bad), "--country", "all", "--out", str(tmp_path)])
    assert code == cli.EXIT_INGEST
    assert "row 2" in capsys.readouterr().err


def test_no_equilibrium_exit_code(tmp_path):
    # theta = 1 with flat growth violates the prone-to-savings bound in every period
    code = cli.main(["sweep", "--gamma", "1,1,1,1,1", "--theta", "1",
                     "--grid-step", "1e-3", "--out", str(tmp_path)])
    assert code == cli.EXIT_NO_EQUILIBRIUM


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "olgpaygo", "--help"], capture_output=True,
                          text=True)
    assert proc.returncode == 0
    assert "--grid-step" in proc.stdout
