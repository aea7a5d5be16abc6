import json
import math

import numpy as np
import pytest

from llent.cli import CSV_COLUMNS, EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse_csv(text):
    lines = [l for l in text.strip().splitlines() if not l.startswith("#")]
    header = lines[0].split(",")
    assert header == list(CSV_COLUMNS)
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestProb:
    def test_free_boson_value(self, capsys):
        code, out, _ = run(capsys, "prob", "--n", "4", "--c", "0", "--k", "2")
        assert code == EXIT_OK
        assert float(out) == pytest.approx(0.375, abs=1e-12)

    def test_csv_output(self, capsys, tmp_path):
        path = tmp_path / "p.csv"
        code, _, _ = run(capsys, "prob", "--n", "2", "--c", "1", "--k", "1",
                         "--out", str(path))
        assert code == EXIT_OK
        rows = parse_csv(path.read_text())
        assert len(rows) == 1
        assert rows[0]["N"] == "2" and rows[0]["k"] == "1"
        assert 0.5 < float(rows[0]["p_k"]) < 0.6

    def test_bad_k_is_usage_error(self, capsys):
        code, _, err = run(capsys, "prob", "--n", "2", "--c", "1", "--k", "5")
        assert code == EXIT_USAGE
        assert json.loads(err)["error"] == "usage"

    def test_negative_coupling_rejected(self, capsys):
        code, _, err = run(capsys, "prob", "--n", "2", "--c", "-3", "--k", "1")
        assert code == EXIT_USAGE


class TestReport:
    def test_all_outcomes_and_epp(self, capsys):
        code, out, _ = run(capsys, "report", "--n", "3", "--c", "2")
        assert code == EXIT_OK
        rows = parse_csv(out)
        assert [int(r["k"]) for r in rows] == [0, 1, 2, 3]
        p = np.array([float(r["p_k"]) for r in rows])
        assert p.sum() == pytest.approx(1.0, abs=1e-10)
        epps = {r["E_PP"] for r in rows}
        assert len(epps) == 1

    def test_json_envelope(self, capsys):
        code, out, _ = run(capsys, "report", "--n", "2", "--c", "1",
                           "--format", "json")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert set(doc) == {"params", "results", "diagnostics", "version"}
        assert set(doc["diagnostics"]) == {"residual", "runtime_ms", "cache_hits"}
        assert len(doc["results"]) == 3


class TestTg:
    def test_pair_probability(self, capsys):
        code, out, _ = run(capsys, "tg", "--n", "2", "--ell", "0.5")
        assert code == EXIT_OK
        rows = parse_csv(out)
        assert rows[1]["c"] == "" and rows[1]["is_TG"] == "1"
        assert float(rows[1]["p_k"]) == pytest.approx(0.5 + 2 / math.pi ** 2,
                                                      abs=1e-12)


class TestSweep:
    def test_grid_rows_plus_tg(self, capsys, tmp_path):
        path = tmp_path / "sweep.csv"
        code, _, _ = run(capsys, "sweep", "--n", "2", "--c-grid",
                         "log:0.01:100:5", "--out", str(path))
        assert code == EXIT_OK
        rows = parse_csv(path.read_text())
        assert len(rows) == 6  # 5 grid points + TG row
        assert rows[-1]["is_TG"] == "1" and rows[-1]["c"] == ""
        p = [float(r["p_k"]) for r in rows]
        assert all(b >= a for a, b in zip(p, p[1:]))

    def test_byte_identical_bodies(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (p1, p2):
            run(capsys, "sweep", "--n", "2", "--c-grid", "lin:1:3:3",
                "--out", str(path))
        body = lambda p: "\n".join(l for l in p.read_text().splitlines()
                                   if not l.startswith("#"))
        assert body(p1) == body(p2)

    def test_threads_preserve_order(self, capsys, tmp_path):
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        run(capsys, "sweep", "--n", "2", "--c-grid", "log:0.1:10:4",
            "--threads", "1", "--out", str(p1))
        run(capsys, "sweep", "--n", "2", "--c-grid", "log:0.1:10:4",
            "--threads", "3", "--out", str(p2))
        body = lambda p: "\n".join(l for l in p.read_text().splitlines()
                                   if not l.startswith("#"))
        assert body(p1) == body(p2)

    def test_all_k_rows(self, capsys):
        code, out, _ = run(capsys, "sweep", "--n", "2", "--c-grid",
                           "lin:1:1:1", "--k", "all", "--no-tg-row")
        rows = parse_csv(out)
        assert [int(r["k"]) for r in rows] == [0, 1, 2]

    def test_bad_grid_spec(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep", "--n", "2", "--c-grid", "log:-1:10:5"])
        assert exc.value.code == EXIT_USAGE


class TestRoots:
    def test_envelope_with_rapidities(self, capsys):
        code, out, _ = run(capsys, "roots", "--n", "3", "--c", "2")
        doc = json.loads(out)
        lam = doc["results"][0]["rapidities"]
        assert len(lam) == 3
        assert sum(lam) == pytest.approx(0.0, abs=1e-10)
        assert doc["diagnostics"]["residual"] < 1e-12


class TestOracleCommands:
    def test_mc(self, capsys):
        code, out, _ = run(capsys, "oracle", "mc", "--n", "2", "--c", "1",
                           "--k", "1", "--samples", "20000", "--seed", "3")
        assert code == EXIT_OK
        res = json.loads(out)["results"][0]
        assert res["samples"] == 20000
        assert 0.3 < res["mean"] < 0.7

    def test_grid(self, capsys):
        code, out, _ = run(capsys, "oracle", "grid", "--n", "2", "--c", "1",
                           "--k", "1", "--points", "40")
        res = json.loads(out)["results"][0]
        assert res["rank"] >= 1
        assert 0.4 < res["raw_trace"] < 0.7

    def test_quad(self, capsys):
        code, out, _ = run(capsys, "oracle", "quad", "--mu", "3.0,-1.0",
                           "--a", "0", "--b", "0.5")
        res = json.loads(out)["results"][0]
        assert res["abs_diff"] < 1e-11


class TestConfig:
    def test_config_supplies_defaults_flags_override(self, capsys, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("ell=0.3\n# comment\n")
        _, out, _ = run(capsys, "prob", "--config", str(cfg), "--n", "4",
                        "--c", "0", "--k", "2")
        assert float(out) == pytest.approx(6 * 0.3 ** 2 * 0.7 ** 2, abs=1e-12)
        _, out, _ = run(capsys, "prob", "--config", str(cfg), "--n", "4",
                        "--c", "0", "--k", "2", "--ell", "0.5")
        assert float(out) == pytest.approx(0.375, abs=1e-12)

    def test_malformed_config(self, capsys, tmp_path):
        cfg = tmp_path / "cfg"
        cfg.write_text("not a pair\n")
        code, _, err = run(capsys, "prob", "--config", str(cfg), "--n", "2",
                           "--c", "1", "--k", "1")
        assert code == EXIT_USAGE

    def test_missing_config_file(self, capsys):
        code, _, _ = run(capsys, "prob", "--config", "/nonexistent", "--n", "2",
                         "--c", "1", "--k", "1")
        assert code == EXIT_USAGE
