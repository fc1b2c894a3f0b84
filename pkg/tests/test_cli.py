from __future__ import annotations

import json
import subprocess
import sys

import pytest

from selfsim.cli import EXIT_ALL_FAILED, EXIT_INVALID, EXIT_NUMERIC, EXIT_OK, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_factor_on_inline_coefficients(capsys):
    code, out, _ = run(capsys, "factor", "--coefficients", "1,1,1,1", "--orders", "2..3",
                       "--eval", "0.5", "--output", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert [r["k"] for r in data["orders"]] == [2, 3]
    assert data["orders"][0]["evaluations"]["0.5"].startswith("2")


def test_factor_fixture_text_table(capsys):
    code, out, _ = run(capsys, "factor", "--fixture", "beta_sym", "--param", "n_colors=5", "--orders", "2..4")
    assert code == EXIT_OK
    assert out.startswith("factor sweep of beta_sym") and "exact" in out


def test_borel_fixed_u(capsys):
    code, out, _ = run(capsys, "borel", "--fixture", "oscillator", "--orders", "2..4", "--u", "0",
                       "--eval", "1", "--output", "csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "k,C,nu,status"
    assert len(out.splitlines()) == 4


def test_borel_small_grid(capsys):
    code, out, _ = run(capsys, "borel", "--fixture", "oscillator", "--orders", "3..4", "--u-grid", "0,0.5,0.25",
                       "--output", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["job"]["u"]["strategy"] == "grid-optimized"


def test_difflog_command(capsys):
    code, out, _ = run(capsys, "difflog", "--coefficients", "1,3,3,1,0", "--orders", "4", "--output", "csv")
    assert code == EXIT_OK
    k, c, nu, status = out.splitlines()[1].split(",")
    assert status == "ok" and nu.startswith("3")


def test_sweep_and_diagnose(tmp_path, capsys):
    job = tmp_path / "job.yaml"
    job.write_text("input: {fixture: z_partition}\norders: 2..5\neval_points: [0.5]\noutput: json\n")
    code, out, _ = run(capsys, "sweep", str(job))
    assert code == EXIT_OK and json.loads(out)["recommended_order"] in (3, 4, 5)

    code, out, _ = run(capsys, "diagnose", str(job), "--output", "text")
    assert code == EXIT_OK
    header = out.splitlines()[0].split()
    assert header[:3] == ["k", "status", "S_k(0.5)"] and "s_k" in header


def test_negative_eval_points_need_equals(capsys):
    code, out, _ = run(capsys, "factor", "--fixture", "kink", "--orders", "2", "--eval=-1,0,1", "--output", "csv")
    assert code == EXIT_OK


def test_validation_exit_code(capsys):
    code, _, err = run(capsys, "factor", "--coefficients", "1", "--orders", "2")
    assert code == EXIT_INVALID and "insufficient coefficients" in err
    code, _, err = run(capsys, "factor", "--orders", "2")
    assert code == EXIT_INVALID and "no input" in err
    with pytest.raises(SystemExit) as info:
        main(["factor", "--output", "xml"])
    assert info.value.code == EXIT_INVALID


def test_all_failed_exit_code(capsys):
    # the pinned odd-order system of this series is singular
    code, out, _ = run(capsys, "factor", "--coefficients", "1,-1,1,2", "--orders", "3", "--output", "csv")
    assert code == EXIT_ALL_FAILED
    assert out.splitlines()[1].endswith("skipped-singular")


def test_difflog_rejects_zero_constant_term(capsys):
    code, _, err = run(capsys, "difflog", "--coefficients", "0,1,1,1", "--orders", "3")
    assert code == EXIT_INVALID and "nonzero constant term" in err


def test_fixtures_listing_and_check(tmp_path, capsys):
    code, out, _ = run(capsys, "fixtures")
    assert code == EXIT_OK and "oscillator" in out and "kink" in out
    path = tmp_path / "fx.txt"
    code, out, _ = run(capsys, "fixtures", "--write", str(path), "--check", str(path))
    assert code == EXIT_OK and "FAIL" not in out
    path.write_text(path.read_text().replace("0.77205", "0.77305"))
    code, out, _ = run(capsys, "fixtures", "--check", str(path))
    assert code == EXIT_NUMERIC and "FAIL" in out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "selfsim", "fixtures"], capture_output=True, text=True)
    assert proc.returncode == 0 and "z_partition" in proc.stdout
