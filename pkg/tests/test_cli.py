import json
import subprocess
import sys
from pathlib import Path

import pytest

from qqw import cli
from qqw import serialize as ser
from qqw.corpus import build_corpus

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS = sorted(p for p in FIXTURES.glob("*.json") if p.name != "manifest.json")


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_corpus_exit_codes(path, capsys):
    cfg = json.loads(path.read_text())
    code, report = run_cli(capsys, cfg["command"], "--config", str(path))
    assert code == cfg["expect_exit"], report
    assert report["command"] == cfg["command"]
    if code == 0:
        assert report.get("passed", True)


def test_corpus_regenerates_byte_identically(tmp_path, capsys):
    manifest = tmp_path / "manifest.json"
    manifest.write_text((FIXTURES / "manifest.json").read_text())
    code, report = run_cli(capsys, "fixtures", "--config", str(manifest))
    assert code == 0
    shipped = {p.name for p in CORPUS}
    assert set(report["written"]) == shipped
    for name in shipped:
        assert (tmp_path / name).read_bytes() == (FIXTURES / name).read_bytes(), name


def test_corpus_names_match_builder():
    assert {f"{name}.json" for name in build_corpus()} == {p.name for p in CORPUS}


def test_broken_sigma3_names_condition(capsys):
    code, report = run_cli(capsys, "verify-action", "--config", str(FIXTURES / "verify_uqb_broken_sigma3.json"))
    assert code == 1
    assert report["error"]["condition"] == "sigma3"


def test_missing_q_reports_path(capsys):
    code, report = run_cli(capsys, "verify-action", "--config", str(FIXTURES / "verify_uqb_missing_q.json"))
    assert code == 2 and report["error"]["path"] == "q"


def test_nonfactoring_report(capsys):
    code, report = run_cli(capsys, "check-factorization", "--config", str(FIXTURES / "taft_nonfactoring.json"))
    assert code == 1
    assert report["checks"]["condition2"] is False and report["checks"]["oracle"] is False


def test_psi_then_phi_through_files(tmp_path, capsys):
    psi_cfg = FIXTURES / "psi_F7_3_3.json"
    bim = tmp_path / "bim.json"
    assert cli.main(["psi", "--config", str(psi_cfg), "--out", str(bim)]) == 0
    back = tmp_path / "back.json"
    assert cli.main(["phi", "--config", str(bim), "--out", str(back)]) == 0
    capsys.readouterr()
    original = json.loads(psi_cfg.read_text())["gamma_rep"]
    assert ser.dumps(json.loads(back.read_text())["gamma_rep"]) == ser.dumps(original)
    again = tmp_path / "again.json"
    assert cli.main(["psi", "--config", str(psi_cfg), "--out", str(again)]) == 0
    assert again.read_bytes() == bim.read_bytes()


def test_roundtrip_on_emitted_bimodule(tmp_path, capsys):
    bim = tmp_path / "bim.json"
    assert cli.main(["psi", "--config", str(FIXTURES / "psi_Q_1_2.json"), "--out", str(bim)]) == 0
    capsys.readouterr()
    code, report = run_cli(capsys, "roundtrip", "--config", str(bim))
    assert code == 0 and report["passed"]


def test_missing_config_file(tmp_path, capsys):
    code, report = run_cli(capsys, "verify-action", "--config", str(tmp_path / "nope.json"))
    assert code == 2 and report["error"]["code"] == "ConfigError"


def test_threads_flag_same_report(capsys):
    path = str(FIXTURES / "verify_uqb_0.json")
    _, one = run_cli(capsys, "verify-action", "--config", path)
    _, four = run_cli(capsys, "verify-action", "--config", path, "--threads", "4")
    assert one == four


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "qqw.cli", "classify-eo", "--config",
                          str(FIXTURES / "classify_t3_gamma1.json")], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["label"] == "A(3, 1)"
