import csv
import io
import json
import math

import pytest

from svteleport import analytics, cli


def run(capsys, *argv, environ=None):
    code = cli.main(list(argv), environ or {})
    out, err = capsys.readouterr()
    return code, out, err


def read_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], [[float(v) if v else None for v in row] for row in rows[1:]]


def test_figure1_defaults(capsys):
    code, out, _ = run(capsys, "figure1")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["m", "P_numeric", "P_closed_form"]
    assert all(abs(p - q) <= 1e-10 for _, p, q in rows)
    assert all(p > 1e-8 for _, p, _ in rows)
    neg = sum(p for m, p, _ in rows if m < 0)
    high = sum(p for m, p, _ in rows if m > 36)
    assert neg > high
    # rows drop only P <= 1e-8 mass
    assert sum(p for _, p, _ in rows) == pytest.approx(1.0, abs=1e-5)


def test_figure2_lambda09(capsys):
    code, out, _ = run(capsys, "figure2", "--lambda", "0.9")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["m", "F_numeric", "F_closed_form"]
    negative = [f for m, f, _ in rows if m < 0]
    assert negative
    for f in negative:
        assert f == pytest.approx(math.exp(-0.36), abs=1e-8)
        assert f == pytest.approx(0.69768, abs=1e-5)
    assert all(abs(a - b) <= 1e-8 for _, a, b in rows)


def test_figure2_lambda_ordering(capsys):
    _, out09, _ = run(capsys, "figure2", "--lambda", "0.9")
    _, out099, _ = run(capsys, "figure2", "--lambda", "0.99")
    f09 = {m: f for m, f, _ in read_csv(out09)[1]}
    f099 = {m: f for m, f, _ in read_csv(out099)[1]}
    assert f099[0] >= f09[0]


def test_figure3(capsys):
    code, out, _ = run(capsys, "figure3")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["m", "F_undisplaced_numeric"]
    f = {int(m): v for m, v in rows}
    assert f[0] == pytest.approx(analytics.f0_undisplaced(6.0, 0.9), abs=1e-8)
    assert max(f, key=f.get) == -7


def test_resource_check(capsys):
    code, out, _ = run(capsys, "resource-check", "--r", "1", "--cutoff", "60")
    assert code == 0
    header, rows = read_csv(out)
    assert header[:4] == ["r", "var_xa_plus_xb", "var_ya_minus_yb", "closed_form"]
    r, vx, vy, closed, f_raw, f_par = rows[0]
    assert vx == pytest.approx(0.27067, abs=1e-5)
    assert vx == pytest.approx(closed, abs=1e-6)
    assert vy == pytest.approx(closed, abs=1e-6)
    assert f_par >= 1 - 1e-8
    lam = math.tanh(1.0)
    assert f_raw == pytest.approx(((1 - lam**2) / (1 + lam**2)) ** 2, abs=1e-9)


def test_quad_sweep_monotone(capsys):
    code, out, _ = run(capsys, "quad-sweep")
    assert code == 0
    header, rows = read_csv(out)
    assert header == ["r", "X", "Y", "fidelity"]
    assert [row[0] for row in rows] == [0.5, 1.0, 1.5, 2.0]
    f = [row[3] for row in rows]
    assert all(a <= b for a, b in zip(f, f[1:]))


def test_quad_sweep_outcomes(capsys):
    code, out, _ = run(capsys, "quad-sweep", "--r", "1", "--outcome", "0,0", "--outcome", "1,-0.5",
                       "--format", "json")
    assert code == 0
    records = json.loads(out)
    assert len(records) == 2
    assert abs(records[0]["fidelity"] - records[1]["fidelity"]) < 1e-6


def test_mc_run_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run(capsys, "mc-run", "--seed", "42", "--trials", "200", "--out", str(a))[0] == 0
    assert run(capsys, "mc-run", "--seed", "42", "--trials", "200", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    lines = a.read_text().splitlines()
    assert len(lines) == 200
    rec = json.loads(lines[0])
    assert set(rec) == {"trial", "seed", "m", "phi", "fidelity_displaced", "fidelity_undisplaced"}
    assert rec["seed"] == 42


def test_csv_float_format(capsys):
    _, out, _ = run(capsys, "figure1", "--alpha", "1", "--lambda", "0.5")
    line = out.splitlines()[1]
    for value in line.split(",")[1:]:
        assert len(value.replace("-", "").replace(".", "").split("e")[0]) <= 12


def test_precedence(capsys, tmp_path):
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({"alpha": 1.0, "lambda": 0.3, "seed": 5}))
    cfg = cli.resolve_config("mc-run", {"config": str(config)}, {})
    assert (cfg.alpha, cfg.lam, cfg.seed) == (1.0, 0.3, 5)
    cfg = cli.resolve_config("mc-run", {"config": str(config)}, {"SVTELE_LAMBDA": "0.4"})
    assert (cfg.alpha, cfg.lam) == (1.0, 0.4)
    cfg = cli.resolve_config("mc-run", {"config": str(config), "lam": 0.5},
                             {"SVTELE_LAMBDA": "0.4"})
    assert cfg.lam == 0.5
    cfg = cli.resolve_config("mc-run", {}, {})
    assert (cfg.alpha, cfg.lam, cfg.format) == (2.0, 0.8, "json")


def test_invalid_config_exit_code(capsys, tmp_path):
    assert run(capsys, "figure1", "--lambda", "1.2")[0] == 2
    assert run(capsys, "quad-sweep", "--grid-points", "10")[0] == 2
    assert run(capsys, "figure1", environ={"SVTELE_LAMBDA": "-0.1"})[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"colour": "red"}))
    code, _, err = run(capsys, "figure1", "--config", str(bad))
    assert code == 2 and "unknown setting" in err


def test_truncation_exit_code(capsys):
    code, _, err = run(capsys, "resource-check", "--r", "1.5", "--cutoff", "10")
    assert code == 3
    assert "cutoff" in err


def test_grid_coverage_exit_code(capsys):
    code, _, _ = run(capsys, "quad-sweep", "--alpha", "6", "--r", "0.5", "--grid-extent", "8")
    assert code == 3


def test_tolerance_breach_exit_code(capsys):
    # a cutoff too small for lambda = 0.99 leaves pmf mass out
    code, _, err = run(capsys, "figure1", "--tail-tol", "1e-3")
    assert code == 1
    assert "tolerance breach" in err
