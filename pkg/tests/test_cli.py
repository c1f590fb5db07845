"""Command-line surface: parsing, CSV contract, exit codes, determinism."""

import math

import pytest

from selfnorm.cli import (CSV_COLUMNS, ConfigError, RunConfig, build_config,
                          main, run)


def make_config(command="bound-exp", **over):
    base = dict(
        command=command, distribution="rademacher", n_grid=[1, 4],
        B_grid=[0.5, 1.0, 2.0], n_sup_range=None, trials=2000, seed=1,
        kr_constant=0.6379, chunk_size=1024, confidence=0.999,
        output_path=None, format="csv", family=None)
    base.update(over)
    return RunConfig(**base)


def read_rows(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    assert header == list(CSV_COLUMNS)
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


class TestBuildConfig:
    def test_defaults(self):
        cfg = build_config("bound-exp", {"dist": "gaussian"})
        assert cfg.n_grid == [1, 4, 16, 64]
        assert math.e in cfg.B_grid
        assert cfg.trials == 100000
        assert cfg.kr_constant == 0.6379
        assert cfg.format == "csv"

    def test_missing_dist_rejected(self):
        with pytest.raises(ConfigError, match="dist"):
            build_config("bound-exp", {})

    def test_grid_parsing(self):
        cfg = build_config("mc", {"dist": "gaussian", "n": "2,8", "B": "1,e,5"})
        assert cfg.n_grid == [2, 8]
        assert cfg.B_grid == [1.0, math.e, 5.0]

    def test_bad_grid_rejected(self):
        with pytest.raises(ConfigError):
            build_config("mc", {"dist": "gaussian", "n": "0,4"})
        with pytest.raises(ConfigError):
            build_config("mc", {"dist": "gaussian", "B": "1,zap"})

    def test_n_sup_range(self):
        cfg = build_config("sweep", {"dist": "gaussian", "n_sup": "1:4096"})
        assert cfg.n_sup_range == (1, 4096)
        with pytest.raises(ConfigError):
            build_config("sweep", {"dist": "gaussian", "n_sup": "9:2"})

    def test_config_file_merge_flags_win(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("dist=gaussian\nn=2,4\ntrials=777\n# comment\n")
        cfg = build_config("mc", {"config": str(path), "trials": 55})
        assert cfg.distribution == "gaussian"
        assert cfg.n_grid == [2, 4]
        assert cfg.trials == 55

    def test_config_file_unknown_key(self, tmp_path):
        path = tmp_path / "run.cfg"
        path.write_text("bogus=1\n")
        with pytest.raises(ConfigError, match="unknown keys"):
            build_config("mc", {"config": str(path), "dist": "gaussian"})


class TestCommands:
    def test_verify_pass_exit_zero(self, tmp_path):
        out = tmp_path / "v.csv"
        cfg = make_config("verify", trials=20000, output_path=str(out))
        assert run(cfg) == 0
        rows = read_rows(out)
        statuses = {r["status"] for r in rows}
        assert "PASS" in statuses and "FAIL" not in statuses
        assert any(r["family"] == "LowerCLT" and r["status"] == "REPORT"
                   for r in rows)

    def test_power_skip_below_e(self, tmp_path):
        out = tmp_path / "p.csv"
        cfg = make_config("bound-power", distribution="gaussian", n_grid=[16],
                          B_grid=[1.0], output_path=str(out))
        assert run(cfg) == 0
        (row,) = read_rows(out)
        assert row["status"] == "SKIP"
        assert row["value"] == ""

    def test_bound_exp_rows(self, tmp_path):
        out = tmp_path / "e.csv"
        cfg = make_config("bound-exp", n_sup_range=(1, 64), output_path=str(out))
        assert run(cfg) == 0
        rows = read_rows(out)
        sup_rows = [r for r in rows if r["n"] == "sup(1..64)"]
        assert len(sup_rows) == 3
        assert all(r["n_star"] for r in sup_rows)

    def test_bound_lower_rows(self, tmp_path):
        out = tmp_path / "l.csv"
        cfg = make_config("bound-lower", distribution="gaussian",
                          output_path=str(out))
        assert run(cfg) == 0
        rows = read_rows(out)
        assert {r["family"] for r in rows} == {"LowerQ1", "LowerCLT"}

    def test_mc_rows(self, tmp_path):
        out = tmp_path / "m.csv"
        cfg = make_config("mc", n_grid=[2], trials=5000, output_path=str(out))
        assert run(cfg) == 0
        rows = read_rows(out)
        assert all(r["family"] == "MC" and r["mc_point"] != "" for r in rows)

    def test_gls_families(self, tmp_path):
        for family, norm_fam, tail_fam in [
                ("psi:degenerate:r=4", "GlsNorm", "GlsTail"),
                ("psi:power:m=2", "GlsNorm", "GlsTail"),
                ("phi:power:m=2", "BphiNorm", "BphiTail"),
                ("phi:natural", "BphiNorm", "BphiTail")]:
            out = tmp_path / "g.csv"
            cfg = make_config("gls", distribution="rademacher",
                              B_grid=[5.0, 10.0], family=family,
                              output_path=str(out))
            assert run(cfg) == 0
            rows = read_rows(out)
            assert rows[0]["family"] == norm_fam
            assert {r["family"] for r in rows[1:]} == {tail_fam}

    def test_sweep_unified_table(self, tmp_path):
        out = tmp_path / "s.csv"
        cfg = make_config("sweep", B_grid=[0.5, 1.0, 3.0], trials=5000,
                          n_sup_range=(1, 16), output_path=str(out))
        assert run(cfg) == 0
        rows = read_rows(out)
        families = {r["family"] for r in rows}
        assert {"ExpLevel", "PowerLevel", "LowerQ1", "LowerCLT"} <= families
        assert any(r["n"] == "sup(1..16)" for r in rows)
        assert any(r["mc_point"] != "" for r in rows if r["family"] == "ExpLevel")

    def test_bad_distribution_raises_config_error(self):
        cfg = make_config("bound-exp", distribution="uniform:a=bogus")
        with pytest.raises(ConfigError, match="dist"):
            run(cfg)

    def test_pretty_format(self, capsys):
        cfg = make_config("bound-lower", format="pretty")
        assert run(cfg) == 0
        outp = capsys.readouterr().out
        assert outp.splitlines()[0].startswith("dist")
        assert "margin" in outp.splitlines()[0]


class TestCsvContract:
    def test_round_trip_15_digits(self, tmp_path):
        out = tmp_path / "rt.csv"
        cfg = make_config("bound-exp", distribution="gaussian",
                          B_grid=[0.5, math.e, 7.3], output_path=str(out))
        run(cfg)
        from selfnorm.bounds import exp_tail_bound
        from selfnorm.distributions import StandardGaussian
        law = StandardGaussian()
        for row in read_rows(out):
            got = float(row["value"])
            exact = exp_tail_bound(law, int(row["n"]), float(row["B"]))
            assert got == pytest.approx(exact, rel=1e-14)

    def test_infinity_encoding(self, tmp_path):
        out = tmp_path / "inf.csv"
        cfg = make_config("bound-exp", B_grid=[3.0], n_grid=[4],
                          output_path=str(out))
        run(cfg)
        (row,) = read_rows(out)
        assert row["value"] == "0"
        assert row["optimizer"] == "inf"

    def test_byte_identical_across_worker_counts(self, tmp_path, monkeypatch):
        cfg_a = make_config("verify", trials=30000, n_grid=[1, 4],
                            output_path=str(tmp_path / "a.csv"))
        cfg_b = make_config("verify", trials=30000, n_grid=[1, 4],
                            output_path=str(tmp_path / "b.csv"))
        monkeypatch.setenv("SELFNORM_THREADS", "1")
        run(cfg_a)
        monkeypatch.setenv("SELFNORM_THREADS", "5")
        run(cfg_b)
        assert (tmp_path / "a.csv").read_bytes() == (tmp_path / "b.csv").read_bytes()


class TestMain:
    def test_usage_error_exit_two(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["bound-exp", "--dist", "uniform:a=bogus"])
        assert exc.value.code == 2
        assert "configuration error" in capsys.readouterr().err

    def test_verify_through_main(self, tmp_path, capsys):
        out = tmp_path / "ok.csv"
        with pytest.raises(SystemExit) as exc:
            main(["verify", "--dist", "rademacher", "--n", "1,4",
                  "--B", "0.5,1", "--trials", "5000", "--seed", "7",
                  "--output", str(out)])
        assert exc.value.code == 0
        assert out.exists()

    def test_unknown_command_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["frobnicate"])
        assert exc.value.code == 2
