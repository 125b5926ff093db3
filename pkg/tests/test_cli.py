import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from fbmecon import BASE_PARAMS
from fbmecon.cli import main

PARAM_NAMES = ("mu_D", "sigma_D", "H", "epsilon", "gamma_C", "gamma_M", "alpha_C",
               "alpha_M", "rho", "k", "p", "l_C", "l_M", "beta1", "beta2")


def write_cfg(path, overrides=None, extra=None):
    vals = {n: getattr(BASE_PARAMS, n) for n in PARAM_NAMES}
    vals.update(overrides or {})
    vals.update(extra or {})
    body = "# test configuration\n" + "\n".join(f"{k} = {v!r}" for k, v in vals.items())
    path.write_text(body + "\n", encoding="utf-8")
    return path


@pytest.fixture
def cfg(tmp_path):
    return write_cfg(tmp_path / "base.cfg")


def read_rows(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


# ---------------------------------------------------------------------------
# simulate


def test_simulate_writes_paths(cfg, tmp_path, capsys):
    out = tmp_path / "paths.csv"
    rc = main(["--config", str(cfg), "--out", str(out), "--seed", "7", "simulate"])
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,dw,w,Lambda,lambda,Z,D_hat"
    assert len(lines) == 1000 + 2
    err = capsys.readouterr().err
    assert "simulate" in err  # stage log on stderr


def test_simulate_deterministic(cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--config", str(cfg), "--out", str(a), "--seed", "7", "simulate"]) == 0
    assert main(["--config", str(cfg), "--out", str(b), "--seed", "7", "simulate"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_simulate_half_hurst_zero_memory(tmp_path):
    cfg = write_cfg(tmp_path / "h.cfg", {"H": 0.5}, {"N": 50})
    out = tmp_path / "paths.csv"
    assert main(["--config", str(cfg), "--out", str(out), "simulate"]) == 0
    rows = read_rows(out)
    assert all(float(r["Lambda"]) == 0.0 for r in rows)


def test_simulate_unwritable_output_is_runtime_failure(cfg, tmp_path):
    rc = main(["--config", str(cfg), "--out", str(tmp_path / "no" / "dir" / "x.csv"), "simulate"])
    assert rc == 2


# ---------------------------------------------------------------------------
# estimate


def test_estimate_roundtrip_from_simulate(cfg, tmp_path):
    paths = tmp_path / "paths.csv"
    mem = tmp_path / "memory.csv"
    assert main(["--config", str(cfg), "--out", str(paths), "--seed", "3", "simulate"]) == 0
    assert main(["--config", str(cfg), "--out", str(mem), "estimate", str(paths)]) == 0
    lines = mem.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "t,dw_hat,Lambda_hat,lambda_hat"
    assert len(lines) == 1000 + 2
    rows = read_rows(mem)
    assert rows[0]["dw_hat"] == ""
    # recovered memory tracks the simulated one (refine-64 oracle vs scheme)
    sim = read_rows(paths)
    lam_sim = np.array([float(r["Lambda"]) for r in sim])
    lam_est = np.array([float(r["Lambda_hat"]) for r in rows])
    assert np.max(np.abs(lam_sim - lam_est)) < 0.05


def classify_via_cli(tmp_path, cfg_path, z_fn, name):
    t = np.linspace(0.0, 1.0, 1001)
    z = z_fn(t)
    data = tmp_path / f"{name}.csv"
    with open(data, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["t", "Z"])
        for ti, zi in zip(t, z):
            w.writerow([f"{ti:.17g}", f"{zi:.17g}"])
    out = tmp_path / f"{name}_mem.csv"
    rc = main(["--config", str(cfg_path), "--out", str(out), "estimate", str(data), "--summary"])
    assert rc == 0
    return data


def test_estimate_summary_classification(tmp_path, capsys):
    cfg_good = write_cfg(tmp_path / "good.cfg", {"H": 0.65, "epsilon": 0.1})
    classify_via_cli(tmp_path, cfg_good, lambda t: 0.015 + 0.02 * (t - 0.5), "z1")
    assert "memory = good" in capsys.readouterr().out

    cfg_bad = write_cfg(tmp_path / "bad.cfg", {"H": 0.35, "epsilon": 1e-5})
    classify_via_cli(tmp_path, cfg_bad, lambda t: 0.015 + 0.02 * (t - 0.5), "z1b")
    captured = capsys.readouterr()
    assert "memory = bad" in captured.out
    assert "warning" in captured.err  # epsilon advisory

    cfg_none = write_cfg(tmp_path / "none.cfg", {"H": 0.5})
    classify_via_cli(tmp_path, cfg_none, lambda t: np.full_like(t, 0.015), "z3")
    assert "memory = none" in capsys.readouterr().out


def test_estimate_rejects_malformed_row(cfg, tmp_path, capsys):
    data = tmp_path / "bad.csv"
    data.write_text("t,Z\n0,0.0\n0.001,oops\n", encoding="utf-8")
    rc = main(["--config", str(cfg), "estimate", str(data)])
    assert rc == 1
    assert "line 3" in capsys.readouterr().err


def test_estimate_rejects_nonuniform_grid(cfg, tmp_path, capsys):
    data = tmp_path / "bad.csv"
    data.write_text("t,Z\n0,0.0\n0.001,0.1\n0.005,0.2\n", encoding="utf-8")
    rc = main(["--config", str(cfg), "estimate", str(data)])
    assert rc == 1
    assert "non-uniform" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# equilibrium


def test_equilibrium_full_protection(cfg, tmp_path, capsys):
    out = tmp_path / "eq.csv"
    rc = main(["--config", str(cfg), "--out", str(out),
               "equilibrium", "--y", "0.5", "--p", "1"])
    assert rc == 0
    row = read_rows(out)[0]
    assert row["region"] == "2"
    assert float(row["x_star"]) == 0.0
    assert row["exists"] == "1"
    assert "region = 2" in capsys.readouterr().out


def test_equilibrium_boundary_state(cfg, capsys):
    rc = main(["--config", str(cfg), "equilibrium", "--y", "0"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "boundary" in out
    assert "n_C      = 1" in out.replace("  ", " ").replace("n_C  ", "n_C ") or "n_C" in out


def test_equilibrium_nonexistence_reports_tables(tmp_path, capsys):
    cfg = write_cfg(
        tmp_path / "noeq.cfg",
        {"mu_D": 0.015, "sigma_D": 0.01, "H": 0.5, "gamma_C": 3.0, "gamma_M": 3.0,
         "alpha_C": 1.0, "alpha_M": 1.0, "rho": 0.01, "k": 2.0, "p": 0.5,
         "l_C": 0.0, "l_M": 0.0},
    )
    out = tmp_path / "eq.csv"
    rc = main(["--config", str(cfg), "--out", str(out), "equilibrium", "--y", "0.5"])
    assert rc == 0
    captured = capsys.readouterr().out
    assert "DOES NOT EXIST" in captured
    assert "region-1 prices" in captured and "region-4 prices" in captured
    row = read_rows(out)[0]
    assert row["exists"] == "0" and row["region"] == "0"
    assert row["r"] == ""


def test_equilibrium_validates_flags(cfg, capsys):
    assert main(["--config", str(cfg), "equilibrium", "--y", "1.5"]) == 1
    assert main(["--config", str(cfg), "equilibrium", "--y", "0.5", "--p", "2"]) == 1


# ---------------------------------------------------------------------------
# sweep


@pytest.fixture
def small_sweep_cfg(tmp_path):
    return write_cfg(tmp_path / "sweep.cfg", extra={"y_step": 0.1})


def test_sweep_row_count_default_grid(cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["--config", str(cfg), "--out", str(out), "sweep"]) == 0
    rows = read_rows(out)
    assert len(rows) == 101 * 3 * 3
    assert rows[0]["y"] == "0" and rows[-1]["y"] == "1"


def test_sweep_figures(small_sweep_cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    figs = tmp_path / "figs"
    assert main(["--config", str(small_sweep_cfg), "--out", str(out),
                 "sweep", "--figures", str(figs)]) == 0
    names = sorted(p.name for p in figs.iterdir())
    assert "figures_manifest.json" in names
    assert sum(n.startswith("fig") and n.endswith(".csv") for n in names) == 12
    manifest = json.loads((figs / "figures_manifest.json").read_text(encoding="utf-8"))
    assert {m["figure"] for m in manifest} == set(range(3, 15))
    fig5 = next(m for m in manifest if m["figure"] == 5)
    assert fig5["quantity"] == "x_star"
    with open(figs / fig5["file"], encoding="utf-8", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 11
    col = "Lambda=0;p=0.6"
    assert col in rows[0]


def test_sweep_kink_and_negative_rates(small_sweep_cfg, tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["--config", str(small_sweep_cfg), "--out", str(out), "sweep"]) == 0
    rows = read_rows(out)
    # x* kink for p=0.6, Lambda=0: cost branch left of the kink, cap right
    sel = [r for r in rows if r["p"] == "0.59999999999999998" or float(r["p"]) == 0.6]
    sel = [r for r in sel if float(r["Lambda"]) == 0.0 and r["region"] in ("1", "2")]
    regions = [r["region"] for r in sorted(sel, key=lambda r: float(r["y"]))]
    flips = sum(a != b for a, b in zip(regions, regions[1:]))
    assert flips == 1 and regions[0] == "2" and regions[-1] == "1"
    # bad-memory rows: the interest rate is negative along the whole line
    bad = [r for r in rows if float(r["Lambda"]) == -5.0 and r["exists"] == "1"]
    assert bad and all(float(r["r"]) < 0.0 for r in bad)


def test_sweep_deterministic(small_sweep_cfg, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["--config", str(small_sweep_cfg), "--out", str(a), "sweep"]) == 0
    assert main(["--config", str(small_sweep_cfg), "--out", str(b), "sweep"]) == 0
    assert a.read_bytes() == b.read_bytes()


# ---------------------------------------------------------------------------
# convergence


def test_convergence_small_run(cfg, tmp_path, capsys):
    out = tmp_path / "conv.csv"
    rc = main(["--config", str(cfg), "--out", str(out), "convergence",
               "--factors", "8,16", "--seeds", "3", "--n-fine", "1024"])
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "dt,median_err_Lambda,median_err_lambda"
    assert len(lines) == 3
    summary = capsys.readouterr().out
    assert "fitted rate" in summary
    rate = float(summary.split("(min")[1].rstrip(")\n"))
    assert rate >= 0.15


def test_convergence_rejects_single_factor(cfg, capsys):
    rc = main(["--config", str(cfg), "convergence", "--factors", "1"])
    assert rc == 1
    assert "two factors" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# plumbing


def test_missing_config_is_validation_failure(capsys):
    assert main(["simulate"]) == 1
    assert "config" in capsys.readouterr().err


def test_bad_config_value(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "bad.cfg", {"gamma_C": 0.5})
    assert main(["--config", str(cfg), "equilibrium", "--y", "0.5"]) == 1
    assert "gamma_C" in capsys.readouterr().err


def test_usage_error_exits_one(capsys):
    assert main(["no-such-command"]) == 1


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "fbmecon.cli"] if False else ["fbmecon", "--help"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "simulate" in proc.stdout and "convergence" in proc.stdout
