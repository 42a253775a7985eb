"""End-to-end CLI tests: exit codes, wire formats, and report artifacts."""

import csv
import json

import pytest

from allz.campaign import CampaignConfig, TrialRecord, compute_metrics, run_campaign
from allz.cli import main, record_json_line


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_jsonl(path, records):
    with open(path, "w", encoding="utf-8") as handle:
        for record in records:
            handle.write(record_json_line(record) + "\n")


class TestFactorCommand:
    def test_success(self, capsys):
        code, out, _ = run_cli(capsys, "factor", "21", "--base", "2", "--strategy", "allz")
        assert code == 0
        payload = json.loads(out)
        assert payload["factor"] == 7
        assert payload["cofactor"] == 3
        assert payload["r"] == 6
        assert payload["witness"]["divisor_z"] == 2

    def test_reference_failure(self, capsys):
        code, out, _ = run_cli(capsys, "factor", "2540107", "--base", "1316667")
        assert code == 1
        payload = json.loads(out)
        assert payload["status"] == "failure"
        assert payload["r"] == 27
        assert [att["divisor_z"] for att in payload["attempts"]] == [3]

    def test_prime_input_rejected(self, capsys):
        code, out, err = run_cli(capsys, "factor", "17", "--base", "3")
        assert code == 2
        assert "prime" in err

    def test_small_input_rejected(self, capsys):
        code, _, err = run_cli(capsys, "factor", "4")
        assert code == 2

    def test_bad_base_rejected(self, capsys):
        code, _, err = run_cli(capsys, "factor", "21", "--base", "1")
        assert code == 2
        code, _, err = run_cli(capsys, "factor", "21", "--base", "21")
        assert code == 2

    def test_shared_factor_base_shortcuts(self, capsys):
        code, out, _ = run_cli(capsys, "factor", "21", "--base", "14")
        assert code == 0
        payload = json.loads(out)
        assert payload["factor"] == 7
        assert payload["witness"]["kind"] == "gcd_shortcut"
        assert payload["r"] is None

    def test_auto_base_is_seeded(self, capsys):
        code1, out1, _ = run_cli(capsys, "factor", "3622301", "--auto-base", "random", "--seed", "5")
        code2, out2, _ = run_cli(capsys, "factor", "3622301", "--auto-base", "random", "--seed", "5")
        assert out1 == out2

    def test_traditional_strategy_selectable(self, capsys):
        code, out, _ = run_cli(
            capsys, "factor", "2540107", "--base", "1316667", "--strategy", "traditional"
        )
        assert code == 1
        assert json.loads(out)["attempts"] == []


class TestOrderCommand:
    def test_basic(self, capsys):
        code, out, _ = run_cli(capsys, "order", "15", "2")
        assert code == 0
        assert json.loads(out) == {"n": 15, "a": 2, "r": 4, "factors": {"2": 2}}

    def test_reference_row(self, capsys):
        code, out, _ = run_cli(capsys, "order", "1406371", "36")
        assert code == 0
        assert json.loads(out) == {
            "n": 1406371,
            "a": 36,
            "r": 15,
            "factors": {"3": 1, "5": 1},
        }

    def test_shared_factor(self, capsys):
        code, _, err = run_cli(capsys, "order", "15", "5")
        assert code == 2
        assert "5" in err


class TestCampaignCommand:
    def test_writes_jsonl_and_summary(self, capsys, tmp_path):
        out_path = tmp_path / "r.jsonl"
        code, out, _ = run_cli(
            capsys,
            "campaign",
            "--digits", "4",
            "--trials", "50",
            "--strategy", "allz",
            "--base-mode", "random",
            "--seed", "42",
            "--out", str(out_path),
        )
        assert code == 0
        assert "success rate:" in out
        lines = out_path.read_text().splitlines()
        assert len(lines) == 50
        records = [TrialRecord.from_json_dict(json.loads(line)) for line in lines]
        assert [r.case_id for r in records] == list(range(50))

    def test_byte_identical_reruns(self, capsys, tmp_path):
        args = [
            "campaign", "--digits", "4", "--trials", "40", "--seed", "9",
        ]
        p1, p2 = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        assert run_cli(capsys, *args, "--out", str(p1))[0] == 0
        assert run_cli(capsys, *args, "--out", str(p2))[0] == 0
        assert p1.read_bytes() == p2.read_bytes()

    def test_trials_zero_writes_empty_file(self, capsys, tmp_path):
        out_path = tmp_path / "empty.jsonl"
        code, out, _ = run_cli(
            capsys, "campaign", "--digits", "4", "--trials", "0", "--out", str(out_path)
        )
        assert code == 0
        assert out_path.read_bytes() == b""
        assert "trials: 0" in out

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        config_path = tmp_path / "c.json"
        config_path.write_text(
            json.dumps({"digits": 4, "trials": 30, "strategy": "traditional", "master_seed": 1})
        )
        out_path = tmp_path / "c.jsonl"
        code, out, _ = run_cli(
            capsys,
            "campaign", "--config", str(config_path), "--trials", "10", "--out", str(out_path),
        )
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert len(lines) == 10  # flag wins over file
        assert json.loads(lines[0])["strategy"] == "traditional"

    def test_invalid_config_exits_2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "campaign", "--digits", "1", "--trials", "5")
        assert code == 2
        code, _, err = run_cli(capsys, "campaign", "--trials", "5")
        assert code == 2
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"digits": 4, "trials": 5, "bogus_key": 1}))
        code, _, err = run_cli(capsys, "campaign", "--config", str(bad))
        assert code == 2

    def test_unwritable_output_exits_3(self, capsys):
        code, _, err = run_cli(
            capsys,
            "campaign", "--digits", "4", "--trials", "1",
            "--out", "/nonexistent-dir/deep/r.jsonl",
        )
        assert code == 3


@pytest.fixture(scope="module")
def sample_records():
    result = run_campaign(
        CampaignConfig(digits=4, trials=120, master_seed=3, strategy="allz")
    )
    return result.records


class TestReportCommand:
    def test_round_trip_and_merge_equivalence(self, capsys, tmp_path, sample_records):
        whole = tmp_path / "whole.jsonl"
        part1 = tmp_path / "part1.jsonl"
        part2 = tmp_path / "part2.jsonl"
        write_jsonl(whole, sample_records)
        write_jsonl(part1, sample_records[:60])
        write_jsonl(part2, sample_records[60:])

        out_whole = tmp_path / "whole.json"
        out_parts = tmp_path / "parts.json"
        code, stdout_whole, _ = run_cli(
            capsys, "report", "--in", str(whole), "--format", "json", "--out", str(out_whole)
        )
        assert code == 0
        code, stdout_parts, _ = run_cli(
            capsys,
            "report", "--in", str(part1), str(part2), "--format", "json",
            "--out", str(out_parts),
        )
        assert code == 0
        assert out_whole.read_bytes() == out_parts.read_bytes()
        assert stdout_whole.replace("2 records", "x") != ""  # summaries printed

    def test_json_report_contents(self, capsys, tmp_path, sample_records):
        src = tmp_path / "r.jsonl"
        write_jsonl(src, sample_records)
        out = tmp_path / "report.json"
        code, _, _ = run_cli(capsys, "report", "--in", str(src), "--out", str(out))
        assert code == 0
        report = json.loads(out.read_text())
        stats = compute_metrics(sample_records)
        assert report["totals"]["trials"] == stats.trials
        assert report["totals"]["successes"] == stats.successes
        assert report["success_by_digits"]["4"]["allz"]["trials"] == stats.trials
        curve = report["cumulative_success_by_bound"]
        assert curve["inf"] == stats.successes
        assert len(report["failure_cases"]) == stats.failures

    def test_csv_failure_listing(self, capsys, tmp_path, sample_records):
        src = tmp_path / "r.jsonl"
        write_jsonl(src, sample_records)
        out = tmp_path / "failures.csv"
        code, _, _ = run_cli(
            capsys, "report", "--in", str(src), "--format", "csv", "--out", str(out)
        )
        assert code == 0
        with open(out, newline="") as handle:
            rows = list(csv.reader(handle))
        assert rows[0] == ["digits", "n", "a", "r", "fail_factors", "fallback_tried"]
        failures = [r for r in sample_records if r.status == "failure"]
        assert len(rows) == 1 + len(failures)
        keys = [(int(row[0]), int(row[1]), int(row[2])) for row in rows[1:]]
        assert keys == sorted(keys)

    def test_malformed_line_reports_position(self, capsys, tmp_path, sample_records):
        src = tmp_path / "broken.jsonl"
        lines = [record_json_line(r) for r in sample_records[:3]]
        lines.insert(2, "{not json")
        src.write_text("\n".join(lines) + "\n")
        code, _, err = run_cli(capsys, "report", "--in", str(src))
        assert code == 2
        assert f"{src}:3" in err

    def test_missing_input_exits_3(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "report", "--in", str(tmp_path / "nope.jsonl"))
        assert code == 3


class TestVerifyPaperCommand:
    def test_all_rows_pass(self, capsys):
        code, out, _ = run_cli(capsys, "verify-paper")
        assert code == 0
        assert "13/13 rows verified" in out
        assert out.count(" ok") == 13
