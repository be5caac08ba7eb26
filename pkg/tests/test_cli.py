"""CLI frontend: exit codes, formats, reproducibility, the documented examples."""

import io
import json
import shutil
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout

import pytest

from p3bundles.cli import main


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        try:
            code = main(list(argv))
        except SystemExit as exc:   # argparse's own exit on usage errors
            code = exc.code if isinstance(exc.code, int) else 2
    return code, out.getvalue(), err.getvalue()


def test_documented_verify_example():
    code, out, _ = run_cli("verify", "prop1", "--m", "1", "--eps", "0",
                           "--a", "5", "--seed", "0")
    assert code == 0
    assert out.startswith("PASS prop1")


def test_documented_enumerate_example():
    code, out, _ = run_cli("series", "enumerate", "--series", "sigma0",
                           "--n-max", "150", "--format", "tsv")
    assert code == 0
    assert any(line.split("\t")[2] == "146" for line in out.splitlines()[1:])


def test_documented_spectrum_example():
    code, out, _ = run_cli("spectrum", "--series", "sigma0",
                           "--m", "1", "--eps", "0", "--a", "2")
    assert code == 0
    assert out == "(-1,0^4,1)\n"


def test_json_reports_embed_seed_and_config_hash():
    code, out, _ = run_cli("monad", "dims", "--series", "sigma1", "--m", "1",
                           "--eps", "0", "--a", "5", "--seed", "9",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["seed"] == 9
    assert len(payload["config_hash"]) == 64
    assert payload["dimension"] == 281


def test_identical_invocations_are_byte_identical():
    argv = ("verify", "prop2", "--m", "1", "--eps", "0", "--a", "6",
            "--seed", "2", "--format", "json")
    assert run_cli(*argv) == run_cli(*argv)


def test_seed_changes_the_witnesses_not_the_verdict():
    one = run_cli("verify", "prop1", "--m", "2", "--eps", "0", "--a", "7",
                  "--seed", "0", "--format", "json")
    two = run_cli("verify", "prop1", "--m", "2", "--eps", "0", "--a", "7",
                  "--seed", "1", "--format", "json")
    assert one[0] == two[0] == 0
    assert json.loads(one[1])["verify"]["configs"] != json.loads(two[1])["verify"]["configs"]


def test_failed_verification_exits_1_with_trace():
    code, _, err = run_cli("verify", "prop1", "--m", "9", "--eps", "0", "--a", "5")
    assert code == 1
    assert "assertion not entailed" in err
    assert "via " in err  # rule trace for the conflicting interval


def test_usage_errors_exit_2():
    assert run_cli("verify", "prop1", "--m", "1")[0] != 0          # missing params
    assert run_cli("series", "density")[0] == 2                    # missing --r
    assert run_cli("nonsense")[0] == 2
    assert run_cli("monad", "dims", "--series", "sigma0", "--m", "1",
                   "--eps", "0", "--a", "3")[0] == 2               # invalid spec


def test_oracle_subcommands():
    code, out, _ = run_cli("oracle", "ideal", "--kind", "ruling", "--m", "2",
                           "--twist", "2", "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["oracle"]["cohomology"][0] == 1   # only the quadric itself
    # charge-2 conics bundle: spectrum (0, -1), so h^1(E(-1)) counts one entry
    code, out, _ = run_cli("oracle", "serre", "--kind", "conics", "--m", "1",
                           "--twist", "-1", "--format", "json")
    assert code == 0
    assert json.loads(out)["oracle"]["cohomology"][1] == 1


def test_profile_reports_unpinned_twists():
    code, out, _ = run_cli("monad", "profile", "--series", "sigma0", "--m", "1",
                           "--eps", "0", "--a", "2", "--lo", "-2", "--hi", "1",
                           "--format", "json")
    assert code == 0
    payload = json.loads(out)
    assert payload["profile"]["-1"] == 6
    assert payload["profile"]["1"] is None
    assert payload["unpinned_twists"] == [1]


def test_catalog_tsv_lists_all_rows():
    code, out, _ = run_cli("series", "catalog", "--format", "tsv")
    assert code == 0
    assert len(out.strip().splitlines()) == 13


@pytest.mark.skipif(shutil.which("p3bundles") is None,
                    reason="console script not installed")
def test_console_script_runs():
    proc = subprocess.run(
        ["p3bundles", "spectrum", "--series", "sigma0", "--m", "1",
         "--eps", "0", "--a", "2"],
        capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert proc.stdout == "(-1,0^4,1)\n"


def test_out_file_respects_env_dir(tmp_path, monkeypatch):
    monkeypatch.setenv("P3BUNDLES_OUT_DIR", str(tmp_path))
    code, out, _ = run_cli("series", "density", "--r", "17",
                           "--format", "json", "--out", "d.json")
    assert code == 0 and out == ""
    assert json.loads((tmp_path / "d.json").read_text())["density"] == "1/17"
