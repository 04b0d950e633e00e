import csv
import io
import json
import subprocess
import sys

import pytest

from bayesbounds.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_report_uniform_four(capsys):
    code, out, _ = run(["report", "--posterior", "0.25,0.25,0.25,0.25"], capsys)
    assert code == 0
    data = json.loads(out)
    b = data["bounds"]
    assert b["exact"] == pytest.approx(0.75)
    assert b["improved_equivocation"] == pytest.approx(0.75)
    assert b["hellman_raviv"] == pytest.approx(1.0)
    assert data["violations"] == []


def test_report_binary_csv(capsys):
    code, out, _ = run(["report", "--posterior", "0.3,0.7", "--beta=-1,-8", "--format", "csv"], capsys)
    assert code == 0
    vals = {r["bound"]: float(r["value"]) for r in rows_of(out)}
    assert vals["exact"] == pytest.approx(0.3)
    assert vals["harmonic_lower"] == pytest.approx(0.21)


@pytest.mark.parametrize("post", ["0.5,0.6", "0.5,-0.1,0.6", "", "a,b"])
def test_report_rejects_bad_posterior(post, capsys):
    code, _, err = run(["report", "--posterior", post], capsys)
    assert code == 2
    assert "error" in err


def test_report_rejects_positive_beta(capsys):
    code, _, err = run(["report", "--posterior", "0.5,0.5", "--beta", "1"], capsys)
    assert code == 2 and "BetaNonNegative" in err


def test_channel_bsc(capsys, tmp_path):
    spec = tmp_path / "bsc.json"
    spec.write_text('{"type": "bsc", "p": 0.1}')
    code, out, _ = run(["channel", str(spec)], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["rho"] == pytest.approx(0.7136958, abs=1e-7)
    assert data["I"] == pytest.approx(data["C_closed_form"], abs=1e-12)
    assert data["rho_max"] >= data["I"]


def test_channel_inline_and_errors(capsys):
    code, out, _ = run(["channel", '{"type": "bec", "eps": 0.5}'], capsys)
    assert code == 0 and json.loads(out)["rho"] == pytest.approx(0.5431066, abs=1e-7)
    code, out, _ = run(["channel", '{"type": "biawgn", "sigma2": 1.0}'], capsys)
    assert code == 0 and json.loads(out)["C_closed_form"] == pytest.approx(0.48594, abs=1e-5)
    assert run(["channel", '{"type": "bsc", "p": 2}'], capsys)[0] == 2
    assert run(["channel", "missing.json"], capsys)[0] == 2
    assert run(["channel", '{"type": "bsc", "p": 0.1}', "--px", "0.2,0.3,0.5"], capsys)[0] == 2


def test_figure_fig1(capsys):
    code, out, _ = run(["figure", "fig1"], capsys)
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 201
    mid = rows[100]
    assert float(mid["p"]) == 0.5
    assert float(mid["exact"]) == 0.5
    assert float(mid["harmonic_lo"]) == 0.25 and float(mid["harmonic_hi"]) == 0.5
    for r in rows:
        assert float(r["harmonic_hi"]) == 2 * float(r["harmonic_lo"])


def test_figure_fig4ab(capsys):
    rows = rows_of(run(["figure", "fig4a"], capsys)[1])
    assert len(rows) == 101
    assert float(rows[0]["capacity"]) == 1.0 and float(rows[0]["rho"]) == 1.0
    rows = rows_of(run(["figure", "fig4b"], capsys)[1])
    mid = rows[50]
    assert float(mid["eps"]) == 0.5
    assert float(mid["capacity"]) == 0.5
    assert float(mid["rho"]) == pytest.approx(0.54311, abs=1e-5)


def test_figure_fig2_sidecar(capsys, tmp_path):
    target = tmp_path / "fig2.csv"
    assert run(["figure", "fig2", "-o", str(target)], capsys)[0] == 0
    rows = rows_of(target.read_text())
    assert len(rows) == 4001
    assert float(rows[0]["y"]) == -20.0 and float(rows[-1]["y"]) == 20.0
    side = rows_of((tmp_path / "fig2_boundaries.csv").read_text())
    assert len(side) > 0 and len(side) % 2 == 0


def test_figure_json_and_unknown(capsys):
    code, out, _ = run(["figure", "fig4a", "--format", "json"], capsys)
    data = json.loads(out)
    assert data["columns"] == ["p", "capacity", "rho"] and len(data["rows"]) == 101
    assert run(["figure", "fig9"], capsys)[0] == 2


def test_figure_fig4c_finite(capsys):
    rows = rows_of(run(["figure", "fig4c", "--points", "11"], capsys)[1])
    assert len(rows) == 11
    for r in rows:
        rho, cap = float(r["rho"]), float(r["capacity"])
        assert 0.0 <= rho <= 1.0 and rho >= cap - 1e-9


ENSEMBLE = ["ensemble", "--channel", '{"type": "bsc", "p": 0.05}', "-n", "6", "-m", "64",
            "--trials", "50", "--seed", "7"]


def test_ensemble(capsys):
    code, out, _ = run(ENSEMBLE, capsys)
    assert code == 0
    data = json.loads(out)
    assert data["error_lower_bound"] == pytest.approx(0.25878, abs=1e-5)
    assert data["checks"]["per_code_error_below_equivocation_bound"] is True
    code2, out2, _ = run(ENSEMBLE + ["--jobs", "3"], capsys)
    assert out2 == out


def test_ensemble_budget_exit(capsys, monkeypatch):
    monkeypatch.setenv("BB_BUDGET", "100")
    code, _, err = run(ENSEMBLE, capsys)
    assert code == 3 and "BudgetExceeded" in err


def test_ensemble_rejects_awgn(capsys):
    argv = ["ensemble", "--channel", '{"type": "biawgn", "sigma2": 1}', "-n", "2", "-m", "4"]
    assert run(argv, capsys)[0] == 2


def test_atomic_output_leaves_no_temp(capsys, tmp_path):
    target = tmp_path / "sub" / "fig4b.csv"
    assert run(["figure", "fig4b", "-o", str(target)], capsys)[0] == 0
    first = target.read_bytes()
    assert run(["figure", "fig4b", "-o", str(target)], capsys)[0] == 0
    assert target.read_bytes() == first
    assert sorted(p.name for p in target.parent.iterdir()) == ["fig4b.csv"]


def test_cosine_laplace_command(capsys):
    code, out, _ = run(["appendix1", "--mc-samples", "100000", "--seed", "2"], capsys)
    data = json.loads(out)
    assert code == 0
    assert data["p_lb"] <= data["exact"] <= data["p_ub"]
    assert data["exact"] <= data["chernoff"] <= data["bhattacharyya"]
    assert data["monte_carlo"]["samples"] == 100000


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "bayesbounds", "report", "--posterior", "1,0"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["bounds"]["exact"] == 0.0
