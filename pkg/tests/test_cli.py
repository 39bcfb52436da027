import csv
import json
import math
import subprocess
import sys

import pytest

from mzi_sensitivity import cli


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def test_report_tmsvs(capsys):
    code, out, _ = run(["report", "--state", "tmsvs", "--zeta", "0.5", "--tau", "1.5707963",
                        "--format", "json"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["F_max_two"] == pytest.approx(1.381098, abs=5e-7)
    assert data["F_dd"] == pytest.approx(1.381098, abs=5e-7)
    assert data["theta_opt_two"] == "any"


def test_report_cs_svs_text(capsys):
    code, out, _ = run(["report", "--state", "cs-svs", "--alpha", "2", "--xi", "0.5",
                        "--tau", "1.5707963", "--upsilon", "1"], capsys)
    assert code == 0
    for key in ("frak_G", "four_var_Jz", "frak_F_max", "tau_opt_two", "theta_opt_single",
                "V_two", "V_single", "snl", "hl", "hofmann", "gain_two"):
        assert key in out


def test_report_domain_error(capsys):
    code, _, err = run(["report", "--state", "cs-pssvs", "--xi", "0", "--kappa", "1"], capsys)
    assert code == 3
    assert json.loads(err.strip().splitlines()[-1])["error"] == "domain"


def test_transmission_flag(capsys):
    code, out, _ = run(["report", "--state", "cs-svs", "--alpha", "1", "--xi", "0.3",
                        "--tau-as-transmission", "0.5", "--format", "json"], capsys)
    assert code == 0
    assert json.loads(out)["tau"] == pytest.approx(math.pi / 2)


def test_gain_alt(capsys):
    base = ["report", "--state", "cs-svs", "--alpha", "2", "--xi", "0.5", "--format", "json"]
    _, out, _ = run(base, capsys)
    _, out_alt, _ = run(base + ["--gain-alt"], capsys)
    a, b = json.loads(out), json.loads(out_alt)
    v, n = a["V_opt_two"], a["mean_N"]
    assert a["gain_opt_two"] == pytest.approx(-10 * math.log10(v * math.sqrt(n)))
    assert b["gain_opt_two"] == pytest.approx(-10 * math.log10(math.sqrt(v) * math.sqrt(n)))


@pytest.mark.parametrize(
    "argv",
    [
        ["sweep", "--param", "nb", "--range", "5:1:10"],
        ["sweep", "--state", "cs-svs", "--param", "nb", "--range", "5:1:10"],
        ["sweep", "--state", "cs-svs", "--param", "nb", "--range", "nonsense"],
        ["report", "--state", "no-such-state"],
        ["report", "--state", "cs-svs", "--alpha", "abc"],
        ["bogus"],
    ],
)
def test_usage_errors(argv, capsys):
    assert run(argv, capsys)[0] == 2


def test_sweep_csv_file(tmp_path, capsys):
    out = tmp_path / "sweep.csv"
    argv = ["sweep", "--state", "cs-svs", "--na", "10", "--param", "nb",
            "--range", "0.1:40:200", "--theory", "both", "--output", str(out)]
    assert run(argv, capsys)[0] == 0
    first = out.read_bytes()
    rows = list(csv.DictReader(first.decode().splitlines()))
    assert len(rows) == 200
    nearest = min(rows, key=lambda r: abs(float(r["n_b"]) - 10))
    assert 420 < float(nearest["F_max_two"]) < 440
    # rerun is byte-identical
    assert run(argv, capsys)[0] == 0
    assert out.read_bytes() == first


def test_sweep_json_keys_match_csv(capsys):
    base = ["sweep", "--state", "cs-pasvs", "--alpha", "25", "--kappa", "1",
            "--param", "xi", "--range", "0.05:2.5:20"]
    _, text_csv, _ = run(base, capsys)
    _, text_json, _ = run(base + ["--format", "json"], capsys)
    header = text_csv.splitlines()[0].split(",")
    data = json.loads(text_json)
    assert len(data) == 20
    assert list(data[0]) == header


def test_sweep_domain_error_leaves_no_file(tmp_path, capsys):
    out = tmp_path / "bad.csv"
    code, _, _ = run(["sweep", "--state", "tmsvs", "--zeta", "0.5", "--param", "nb",
                      "--range", "0:1:3", "--output", str(out)], capsys)
    assert code == 3
    assert not out.exists()


def test_sweep_io_error(tmp_path, capsys):
    target = tmp_path / "missing" / "x.csv"
    code, _, err = run(["sweep", "--state", "cs-svs", "--alpha", "1", "--param", "xi",
                        "--range", "0:1:3", "--output", str(target)], capsys)
    assert code == 4
    assert json.loads(err.strip())["error"] == "io"


@pytest.mark.parametrize(
    "argv",
    [
        ["oracle-check", "--state", "cs-svs", "--alpha", "1", "--xi", "0.5", "--cutoff", "60"],
        ["oracle-check", "--state", "tmsvs", "--zeta", "0.5", "--cutoff", "60"],
    ],
)
def test_oracle_check_pass(argv, capsys):
    code, out, _ = run(argv, capsys)
    assert code == 0
    assert "PASS" in out


def test_oracle_check_starved(capsys):
    code, out, err = run(["oracle-check", "--state", "cs-svs", "--alpha", "6",
                          "--cutoff", "10"], capsys)
    assert code == 5
    assert "FAIL" in out and "truncation" in err


def test_table1(capsys):
    code, out, _ = run(["table1", "--na", "10", "--nb", "10", "--format", "json"], capsys)
    assert code == 0
    rows = {r["state"]: r for r in json.loads(out)}
    assert len(rows) == 6
    assert rows["cs-css"]["frak_F"] == pytest.approx(420)
    assert rows["tmsvs"]["frak_G"] is None


def test_config_file_overridden_by_flags(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# defaults\nstate = cs-svs\nalpha = 2\nxi = 0.5\nformat = json\n")
    code, out, _ = run(["--config", str(cfg), "report", "--xi", "0.3"], capsys)
    assert code == 0
    data = json.loads(out)
    assert data["n_a"] == pytest.approx(4.0)
    assert data["n_b"] == pytest.approx(math.sinh(0.3) ** 2)


def test_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("no equals sign here\n")
    assert run(["--config", str(cfg), "table1", "--na", "1", "--nb", "1"], capsys)[0] == 2
    assert run(["--config", str(tmp_path / "nope"), "table1", "--na", "1", "--nb", "1"],
               capsys)[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mzi_sensitivity", "table1", "--na", "4",
                           "--nb", "2", "--format", "csv"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0].startswith("state,n_a,n_b")
