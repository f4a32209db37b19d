import csv
import io
import subprocess
import sys

import numpy as np
import pytest

from hybridbf.cli import (RESULT_COLUMNS, ConfigError, load_scenario, main, parse_scenario,
                          summarize)
from hybridbf.precoder_subarray import Partition

BASE = """\
[tx]
geometry = ula
n = 8

[rx]
geometry = ula
n = 2

[ofdm]
n_subcarriers = {K}

[channel]
n_cluster = 3
n_subray = 4

[run]
n_rf = {n_rf}
snr_db = {snr}
trials = {trials}
seed = 5
schemes = {schemes}
"""


def write_cfg(tmp_path, name="s.ini", K=8, n_rf="2", snr="0, 10", trials=1,
              schemes="fully_digital"):
    path = tmp_path / name
    path.write_text(BASE.format(K=K, n_rf=n_rf, snr=snr, trials=trials, schemes=schemes))
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    out, err = capsys.readouterr()
    return code, out, err


def rows_of(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_row_count_digital_only(tmp_path, capsys):
    cfg = write_cfg(tmp_path, snr="-5, 0, 5, 10")
    code, out, _ = run(["simulate", "--config", cfg], capsys)
    assert code == 0
    rows = rows_of(out)
    assert len(rows) == 4
    assert [r["snr_db"] for r in rows] == ["-5", "0", "5", "10"]
    assert all(r["n_rf"] == r["n_tx"] == "8" for r in rows)
    assert out.splitlines()[0] == ",".join(RESULT_COLUMNS)


def test_byte_identical_and_worker_independent(tmp_path, capsys):
    cfg = write_cfg(tmp_path, trials=3, schemes="fully_digital, fully_connected, dynamic_greedy")
    outs = []
    for workers in (1, 1, 2):
        path = tmp_path / f"out{len(outs)}.csv"
        code, _, _ = run(["simulate", "--config", cfg, "--out", path, "--no-timing",
                          "--workers", workers], capsys)
        assert code == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_row_order_and_formatting(tmp_path, capsys):
    cfg = write_cfg(tmp_path, trials=2, n_rf="2, 4", snr="0, 10",
                    schemes="fully_connected, fixed:adjacent")
    code, out, _ = run(["simulate", "--config", cfg], capsys)
    assert code == 0
    rows = rows_of(out)
    keys = [(r["trial"], r["snr_db"], r["scheme"], r["n_rf"]) for r in rows]
    assert keys[:4] == [("0", "0", "fully_connected", "2"), ("0", "0", "fully_connected", "4"),
                        ("0", "0", "fixed:adjacent", "2"), ("0", "0", "fixed:adjacent", "4")]
    assert len(rows) == 2 * 2 * 2 * 2
    for r in rows:
        digits = r["spectral_efficiency"].replace(".", "").lstrip("0")
        assert len(digits.rstrip("0")) <= 12
        assert float(r["spectral_efficiency"]) >= 0
        assert float(r["wall_time_ms"]) >= 0
        if r["scheme"] == "fixed:adjacent":
            p = Partition(tuple(tuple(map(int, s.split(","))) for s in r["partition"].split(";")))
            assert p.n_rf == int(r["n_rf"])
        else:
            assert r["partition"] == ""


def test_channel_shared_within_trial(tmp_path, capsys):
    cfg = write_cfg(tmp_path, trials=3, schemes="fully_digital, fully_connected, fixed:interlaced")
    code, out, _ = run(["simulate", "--config", cfg, "--channel-hash"], capsys)
    assert code == 0
    rows = rows_of(out)
    by_trial = {}
    for r in rows:
        by_trial.setdefault(r["trial"], set()).add(r["channel_hash"])
    assert all(len(h) == 1 for h in by_trial.values())
    assert len(set().union(*by_trial.values())) == 3


def test_seed_override(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    _, a, _ = run(["simulate", "--config", cfg, "--no-timing"], capsys)
    _, b, _ = run(["simulate", "--config", cfg, "--no-timing", "--seed", "6"], capsys)
    _, c, _ = run(["simulate", "--config", cfg, "--no-timing", "--seed", "5"], capsys)
    assert a != b and a == c


def test_summary_reaggregates(tmp_path, capsys):
    cfg = write_cfg(tmp_path, trials=4, schemes="fully_digital, fully_connected")
    res, summ = tmp_path / "r.csv", tmp_path / "s.csv"
    code, _, _ = run(["simulate", "--config", cfg, "--out", res, "--summary", summ], capsys)
    assert code == 0
    assert summ.read_text() == summarize(res.read_text())
    code, out, _ = run(["summarize", res], capsys)
    assert code == 0 and out == summ.read_text()
    cells = rows_of(out)
    assert all(c["count"] == "4" for c in cells)
    raw = [float(r["spectral_efficiency"]) for r in rows_of(res.read_text())
           if r["scheme"] == "fully_connected" and r["snr_db"] == "10"]
    cell = next(c for c in cells if c["scheme"] == "fully_connected" and c["snr_db"] == "10")
    assert float(cell["se_mean"]) == pytest.approx(np.mean(raw), rel=1e-11)


def test_config_output_key_relative(tmp_path, capsys):
    cfg = write_cfg(tmp_path)
    cfg.write_text(cfg.read_text() + "output = res.csv\n")
    code, out, _ = run(["simulate", "--config", cfg], capsys)
    assert code == 0 and out == ""
    assert (tmp_path / "res.csv").read_text().startswith("scheme,")


def test_rf_chain_sweep_trend(tmp_path, capsys):
    path = tmp_path / "sweep.ini"
    path.write_text(BASE.format(K=64, n_rf="1, 2, 4, 8", snr="-10, 10", trials=10,
                                schemes="fully_connected").replace("n = 8", "n = 16", 1)
                    .replace("n = 2\n", "n = 4\n", 1)
                    .replace("n_cluster = 3\nn_subray = 4", "n_cluster = 8\nn_subray = 10"))
    code, out, _ = run(["simulate", "--config", path, "--no-timing"], capsys)
    assert code == 0
    cells = rows_of(summarize(out))
    for snr in ("-10", "10"):
        se = [float(c["se_mean"]) for c in cells if c["snr_db"] == snr]
        assert len(se) == 4
        assert se == sorted(se)


def test_exhaustive_guard_is_per_scheme(tmp_path, capsys):
    # S(8,2) = 127 fits under the limit, S(8,3) = 966 does not
    cfg = write_cfg(tmp_path, n_rf="2, 3", schemes="fully_connected, dynamic_exhaustive")
    code, out, err = run(["simulate", "--config", cfg, "--exhaustive-limit", "200"], capsys)
    assert code == 3
    assert "instance too large for exhaustive search" in err
    assert "n_rf=3" in err
    got = {(r["scheme"], r["n_rf"]) for r in rows_of(out)}
    assert got == {("fully_connected", "2"), ("fully_connected", "3"),
                   ("dynamic_exhaustive:exact", "2")}


@pytest.mark.parametrize("mutate,needle", [
    (lambda t: t.replace("n = 8", "n = eight"), ":3: [tx] n: invalid integer"),
    (lambda t: t.replace("n_rf = 2", "n_rf = 2, x"), ":17: [run] n_rf"),
    (lambda t: t.replace("schemes = fully_digital", "schemes = warp_drive"), "[run] schemes"),
    (lambda t: t.replace("[channel]", "[chanel]"), "[chanel]: unknown section"),
    (lambda t: t.replace("n_subray = 4", "n_subray = 4\nspread = 3"), "[channel] spread: unknown key"),
    (lambda t: t.replace("trials = 1", "trials = 0"), "trials must be at least 1"),
    (lambda t: t.replace("n_rf = 2", "n_rf = 9"), "outside 1..8"),
    (lambda t: t.replace("[rx]\ngeometry = ula\nn = 2\n", ""), "missing section [rx]"),
    (lambda t: t.replace("geometry = ula\nn = 8", "geometry = upa\nrows = 2"), "missing required key 'cols'"),
])
def test_config_errors(tmp_path, capsys, mutate, needle):
    path = tmp_path / "bad.ini"
    path.write_text(mutate(BASE.format(K=8, n_rf="2", snr="0", trials=1, schemes="fully_digital")))
    with pytest.raises(ConfigError) as exc:
        load_scenario(path)
    assert needle in str(exc.value)
    code, out, err = run(["simulate", "--config", path], capsys)
    assert code == 1 and out == ""
    assert err.startswith("hybridbf: error:")


def test_missing_config_file(tmp_path, capsys):
    code, _, err = run(["simulate", "--config", tmp_path / "nope.ini"], capsys)
    assert code == 1 and "cannot read config" in err


def test_parse_scenario_defaults():
    scn = parse_scenario("[tx]\nn = 4\n[rx]\nn = 1\n[run]\nsnr_db = 0\nschemes = fully_digital\n")
    assert scn.grid.n_subcarriers == 64 and scn.grid.cp_length == 16
    assert scn.clusters.n_cluster == 8 and scn.trials == 1 and scn.n_rf == ()


def test_partition_and_channel_commands(tmp_path, capsys):
    cfg = write_cfg(tmp_path, K=16)
    ch, cov = tmp_path / "h.csv", tmp_path / "r.csv"
    code, _, _ = run(["channel", "--config", cfg, "--trial", 1, "--out", ch, "--cov-out", cov],
                     capsys)
    assert code == 0
    code, greedy_txt, err = run(["partition", "--cov", cov, "--n-rf", 2], capsys)
    assert code == 0 and "objective/K" in err
    assert Partition.from_text(greedy_txt).n_rf == 2
    code, from_ch, _ = run(["partition", "--channel", ch, "--n-rf", 2], capsys)
    assert from_ch == greedy_txt
    code, ex_txt, _ = run(["partition", "--cov", cov, "--n-rf", 2, "--method", "exhaustive",
                           "--score", "approx", "--equal-size"], capsys)
    assert code == 0
    assert [len(s) for s in Partition.from_text(ex_txt).subsets] == [4, 4]
    code, _, err = run(["partition", "--cov", cov, "--n-rf", 3, "--method", "exhaustive",
                        "--exhaustive-limit", 10], capsys)
    assert code == 1 and "instance too large" in err


def test_count_command(capsys):
    code, out, _ = run(["count", 16, 4], capsys)
    assert code == 0
    assert "stirling2(16,4) = 171798901" in out
    assert "equal_size_count(16,4) = 2627625" in out
    assert "above limit" in out
    code, out, _ = run(["count", 5, 2], capsys)
    assert "n/a" in out and "within limit" in out


def test_bounds_check_command(capsys):
    code, out, _ = run(["bounds-check", "--trials", 200], capsys)
    assert code == 0
    assert "0 violations in 200" in out and out.count("PASS") == 2


def test_usage_errors_nonzero():
    proc = subprocess.run([sys.executable, "-m", "hybridbf.cli", "simulate"],
                          capture_output=True, text=True)
    assert proc.returncode != 0 and "--config" in proc.stderr
    proc = subprocess.run([sys.executable, "-m", "hybridbf.cli", "count", "4", "2",
                           "--exhaustive-limit", "0"], capture_output=True, text=True)
    assert proc.returncode != 0
