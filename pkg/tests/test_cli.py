"""Command-line interface: listings, reports, DOT output, exit codes."""

import json
import subprocess
import sys
from pathlib import Path

from stonecheck.cli import exit_code_for_report, main, report_json
from stonecheck.harness import CheckResult, InstanceReport, VerificationReport

SAMPLE = Path(__file__).resolve().parents[1] / "src/stonecheck/data/sample_document.json"
GOLDEN_DIR = Path(__file__).resolve().parent / "data"


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "stonecheck", *args],
        text=True,
        capture_output=True,
        check=False,
    )


def test_dual_lists_points_deterministically():
    proc = run_cli("dual", str(SAMPLE), "four")
    assert proc.returncode == 0
    assert "points: 2" in proc.stdout
    assert "u0: principal ultrafilter at atom {0}" in proc.stdout
    again = run_cli("dual", str(SAMPLE), "four")
    assert again.stdout == proc.stdout


def test_dual_of_degenerate_algebra_exits_2(tmp_path):
    doc = tmp_path / "deg.json"
    doc.write_text('{"algebras":[{"name":"one","powerset":0}]}')
    proc = run_cli("dual", str(doc), "one")
    assert proc.returncode == 2


def test_dual_unknown_name_exits_2():
    proc = run_cli("dual", str(SAMPLE), "nonexistent")
    assert proc.returncode == 2
    assert "nonexistent" in proc.stderr


def test_dual_dot_output(tmp_path):
    out = tmp_path / "hasse.dot"
    proc = run_cli("dual", str(SAMPLE), "four", "--dot", "--out", str(out))
    assert proc.returncode == 0
    text = out.read_text()
    assert text.startswith('digraph "four"')
    assert "e0 -> e1" in text


def test_canext_summary(tmp_path):
    doc = tmp_path / "doc.json"
    doc.write_text(
        '{"algebras":[{"name":"b1","powerset":1},{"name":"b3","powerset":3},'
        '{"name":"b4","powerset":4}]}'
    )
    proc = run_cli("canext", str(doc), "b3")
    assert proc.returncode == 0
    assert "points: 3" in proc.stdout
    assert "extension size: 8" in proc.stdout
    assert "dense: pass" in proc.stdout
    assert "compact: pass" in proc.stdout

    assert "points: 1" in run_cli("canext", str(doc), "b1").stdout
    assert "extension size: 16" in run_cli("canext", str(doc), "b4").stdout


def test_verify_all_two_atoms(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("verify", "--all", "--max-atoms", "2", "--out", str(out))
    assert proc.returncode == 0
    payload = json.loads(out.read_text())
    assert payload["schema_version"] == 1
    homs = [i for i in payload["instances"] if i["descriptor"]["kind"] == "hom"]
    assert len(homs) == 8
    verdicts = {
        c["verdict"] for inst in payload["instances"] for c in inst["checks"]
    }
    assert verdicts == {"pass"}


def test_verify_named_hom_passes():
    proc = run_cli("verify", str(SAMPLE), "identity_four")
    assert proc.returncode == 0
    payload = json.loads(proc.stdout)
    assert payload["instances"][0]["descriptor"]["name"] == "identity_four"


def test_verify_report_is_byte_identical_across_runs(tmp_path):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    assert run_cli("verify", str(SAMPLE), "collapse_four_to_two", "--out", str(out1)).returncode == 0
    assert run_cli("verify", str(SAMPLE), "collapse_four_to_two", "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_verify_usage_errors_exit_2():
    assert run_cli("verify", str(SAMPLE), "identity_four", "--all").returncode == 2
    assert run_cli("verify", "--all").returncode == 2
    assert run_cli("verify", "--all", "--max-atoms", "2", "--seed", "1").returncode == 2
    assert run_cli("verify").returncode == 2
    assert run_cli("verify", str(SAMPLE)).returncode == 2
    assert run_cli("frobnicate").returncode == 2


def test_verify_sampled_mode_is_deterministic(tmp_path):
    out1, out2 = tmp_path / "s1.json", tmp_path / "s2.json"
    args = ("verify", "--all", "--max-atoms", "3", "--seed", "7", "--count", "5")
    assert run_cli(*args, "--out", str(out1)).returncode == 0
    assert run_cli(*args, "--out", str(out2)).returncode == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_diagram_matches_golden_file(tmp_path):
    out = tmp_path / "diagram.dot"
    proc = run_cli("diagram", str(SAMPLE), "collapse_four_to_two", "--out", str(out))
    assert proc.returncode == 0
    golden = (GOLDEN_DIR / "diagram_collapse_four_to_two.dot").read_bytes()
    assert out.read_bytes() == golden


def test_diagram_is_byte_identical_across_runs(tmp_path):
    out1, out2 = tmp_path / "d1.dot", tmp_path / "d2.dot"
    run_cli("diagram", str(SAMPLE), "embed_two_in_four", "--out", str(out1))
    run_cli("diagram", str(SAMPLE), "embed_two_in_four", "--out", str(out2))
    assert out1.read_bytes() == out2.read_bytes()


def test_diagram_identity_tooltips():
    proc = run_cli("diagram", str(SAMPLE), "identity_four")
    assert proc.returncode == 0
    assert 'label="h_*" tooltip="0->0; 1->1"' in proc.stdout


def test_diagram_unwritable_path_exits_2(tmp_path):
    proc = run_cli(
        "diagram", str(SAMPLE), "identity_four", "--out", str(tmp_path)
    )
    assert proc.returncode == 2


def test_exit_code_mapping_for_failing_report():
    failing = VerificationReport(
        [
            InstanceReport(
                {"kind": "hom", "name": "synthetic"},
                [CheckResult("sigma_equals_double_dual", "fail", {"subset_mask": 1})],
            )
        ]
    )
    assert exit_code_for_report(failing) == 1
    passing = VerificationReport(
        [InstanceReport({"kind": "hom"}, [CheckResult("anything", "pass")])]
    )
    assert exit_code_for_report(passing) == 0
    informational = VerificationReport(
        [InstanceReport({"kind": "monotone"}, [CheckResult("probe", "info")])]
    )
    assert exit_code_for_report(informational) == 0


def test_report_json_envelope():
    report = VerificationReport(
        [InstanceReport({"kind": "hom"}, [CheckResult("x", "pass")])]
    )
    payload = json.loads(report_json(report, "digest123"))
    assert payload["input_digest"] == "digest123"
    assert payload["tool_version"]
    assert payload["instances"][0]["timing_ms"] == 0


def test_main_callable_in_process(capsys):
    code = main(["canext", str(SAMPLE), "two"])
    assert code == 0
    out = capsys.readouterr().out
    assert "points: 1" in out
    assert "extension size: 2" in out
