import csv
import json
import math
from pathlib import Path

import pytest

from owisac import cli
from owisac.errors import NonConvergence

GOLDEN = Path(__file__).parent / "golden"


def _write_config(tmp_path, cfg):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg), encoding="utf-8")
    return str(path)


def _read(path):
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    comments = [ln for ln in lines if ln.startswith("#")]
    rows = list(csv.DictReader(ln for ln in lines if not ln.startswith("#")))
    return comments, rows


def test_golden_tradeoff_low(tmp_path):
    assert cli.main(["tradeoff-low", "--out", str(tmp_path)]) == 0
    got = (tmp_path / "tradeoff_low.csv").read_bytes()
    assert got == (GOLDEN / "tradeoff_low.csv").read_bytes()


def test_reruns_are_byte_identical(tmp_path):
    cfg = _write_config(tmp_path, {
        "constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": 1.156}],
        "sense_snr_db": [10, 30], "pam_orders": [8], "trials": 6,
    })
    outs = []
    for run, workers in (("a", "1"), ("b", "3")):
        out = tmp_path / run
        assert cli.main(["simulate-rmse", "--config", cfg, "--out", str(out), "--seed", "7", "--workers", workers]) == 0
        outs.append((out / "simulate_rmse.csv").read_text(encoding="utf-8"))
    # the worker count is part of the recorded config; everything else matches
    strip = [[ln for ln in o.splitlines() if not ln.startswith("# workers")] for o in outs]
    assert strip[0] == strip[1]
    out = tmp_path / "c"
    assert cli.main(["simulate-rmse", "--config", cfg, "--out", str(out), "--seed", "7", "--workers", "1"]) == 0
    assert (out / "simulate_rmse.csv").read_text(encoding="utf-8") == outs[0]


def test_csv_header_carries_resolved_config(tmp_path):
    assert cli.main(["tradeoff-high", "--out", str(tmp_path), "--seed", "11"]) == 0
    comments, rows = _read(tmp_path / "tradeoff_high.csv")
    assert comments[0] == "# owisac-csv v1"
    assert comments[1] == "# kind: tradeoff-high"
    assert "# seed = 11" in comments
    assert any(c.startswith("# ab_pairs = ") for c in comments)
    assert "asymptotic_gap_nats" in rows[0]


def test_tradeoff_high_depends_only_on_ratio(tmp_path):
    cfg = _write_config(tmp_path, {"ab_pairs": [[0.1, 1.0], [0.05, 0.5], [0.2, 1.0]]})
    assert cli.main(["tradeoff-high", "--config", cfg, "--out", str(tmp_path)]) == 0
    _, rows = _read(tmp_path / "tradeoff_high.csv")
    curves = {}
    for r in rows:
        curves.setdefault((r["a_min"], r["b_peak"]), []).append(float(r["asymptotic_gap_nats"]))
    a, b = curves[("0.1", "1.0")], curves[("0.05", "0.5")]
    assert len(a) == 10
    assert max(abs(x - y) for x, y in zip(a, b)) < 1e-9
    assert curves[("0.2", "1.0")] != a
    # NSP 0 is the peak-limited gap
    assert a[0] == pytest.approx(-0.5 * math.log(2 * math.pi * math.e), abs=1e-12)


def test_capacity_curve_sandwich_every_row(tmp_path):
    cfg = _write_config(tmp_path, {
        "constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": 1.156}],
        "snr_db": {"start": 0, "stop": 40, "step": 10}, "pam_orders": [4],
    })
    assert cli.main(["capacity-curve", "--config", cfg, "--out", str(tmp_path), "--plot"]) == 0
    _, rows = _read(tmp_path / "capacity_curve.csv")
    assert [float(r["snr_db"]) for r in rows] == [0.0, 10.0, 20.0, 30.0, 40.0]
    for r in rows:
        lower = float(r["lower_nats"])
        assert lower <= min(float(r["upper_low_nats"]), float(r["upper_high_nats"])) + 1e-9
        assert float(r["upper_nats"]) == min(float(r["upper_low_nats"]), float(r["upper_high_nats"]))
    assert (tmp_path / "capacity_curve.svg").exists()


def test_bits_flag_converts_units(tmp_path):
    assert cli.main(["maxent", "--out", str(tmp_path / "n")]) == 0
    assert cli.main(["maxent", "--out", str(tmp_path / "b"), "--bits"]) == 0
    _, nats = _read(tmp_path / "n" / "maxent.csv")
    _, bits = _read(tmp_path / "b" / "maxent.csv")
    for rn, rb in zip(nats, bits):
        assert float(rb["entropy_bits"]) == pytest.approx(float(rn["entropy_nats"]) / math.log(2), rel=1e-15)


def test_maxent_marks_infeasible_point(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"constraints": [
        {"a_min": 0.1, "b_peak": 1.0, "sigma_h": 0.8},
        {"a_min": 0.1, "b_peak": 1.0, "sigma_h": 2.0},
    ]})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 0
    _, rows = _read(tmp_path / "maxent.csv")
    assert rows[0]["case"] == "Infeasible"
    assert rows[0]["eta_star"] == ""
    assert rows[1]["case"] == "TradeOff"
    assert float(rows[1]["eta_star"]) == pytest.approx(-0.234662, abs=1e-6)
    assert "1 infeasible skipped" in capsys.readouterr().out


def test_nsp_constraint_entry(tmp_path):
    cfg = _write_config(tmp_path, {"constraints": [{"a_min": 0.1, "b_peak": 1.0, "nsp": 0.9}]})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 0
    _, rows = _read(tmp_path / "maxent.csv")
    assert float(rows[0]["nsp"]) == pytest.approx(0.9, abs=1e-12)
    assert float(rows[0]["sigma_h"]) == pytest.approx(1.156, abs=1e-3)


def test_pam_and_cdf_outputs(tmp_path):
    cfg = _write_config(tmp_path, {
        "constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": 2.406}],
        "pam_orders": [4, 16], "cdf_points": 11,
    })
    assert cli.main(["pam", "--config", cfg, "--out", str(tmp_path)]) == 0
    _, rows = _read(tmp_path / "pam.csv")
    assert {r["design"] for r in rows} == {"2-PAM-low", "4-PAM-high", "16-PAM-high"}
    per_design = list((tmp_path).glob("pam_2.406_*.csv"))
    assert len(per_design) == 3
    assert cli.main(["cdf", "--config", cfg, "--out", str(tmp_path)]) == 0
    _, rows = _read(tmp_path / "cdf.csv")
    assert len(rows) == 11
    assert float(rows[0]["maxent_cdf"]) == 0.0
    assert float(rows[-1]["pam16_cdf"]) == 1.0


def test_simulate_mse_columns(tmp_path):
    cfg = _write_config(tmp_path, {
        "constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": 1.156}],
        "sense_snr_db": [20], "pam_orders": [8], "trials": 4,
    })
    assert cli.main(["simulate-mse", "--config", cfg, "--out", str(tmp_path)]) == 0
    comments, rows = _read(tmp_path / "simulate_mse.csv")
    assert tuple(rows[0].keys()) == cli.SENSING_COLUMNS
    assert len(rows) == 2
    assert all(r["trials"] == "4" for r in rows)


def test_bad_json_reports_line_and_exits_1(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "trials": 3,\n  "seed": \n}\n', encoding="utf-8")
    assert cli.main(["maxent", "--config", str(path), "--out", str(tmp_path)]) == 1
    err = capsys.readouterr().err
    assert "line 4" in err


def test_schema_violation_names_field(tmp_path, capsys):
    cfg = _write_config(tmp_path, {"constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": -2}]})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 1
    assert "constraints/0/sigma_h" in capsys.readouterr().err


def test_unknown_key_exits_1(tmp_path):
    cfg = _write_config(tmp_path, {"trails": 5})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 1


def test_invalid_constraint_values_exit_1(tmp_path):
    cfg = _write_config(tmp_path, {"constraints": [{"a_min": 0.5, "b_peak": 0.2, "sigma_h": 3.0}]})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 1


def test_nonconvergence_exits_2_and_names_point(tmp_path, capsys, monkeypatch):
    def boom(*_args, **_kw):
        raise NonConvergence("bracket stalled")

    monkeypatch.setattr(cli, "solve_max_entropy", boom)
    cfg = _write_config(tmp_path, {"constraints": [{"a_min": 0.1, "b_peak": 1.0, "sigma_h": 2.0}]})
    assert cli.main(["maxent", "--config", cfg, "--out", str(tmp_path)]) == 2
    err = capsys.readouterr().err
    assert "sigma_h=2.0" in err and "bracket stalled" in err


def test_plot_is_reproducible(tmp_path):
    pytest.importorskip("matplotlib")
    for d in ("p1", "p2"):
        assert cli.main(["tradeoff-low", "--out", str(tmp_path / d), "--plot"]) == 0
    assert (tmp_path / "p1" / "tradeoff_low.svg").read_bytes() == (tmp_path / "p2" / "tradeoff_low.svg").read_bytes()
