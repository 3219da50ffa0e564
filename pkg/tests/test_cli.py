import csv
import io
import json

import pytest

from collatz_census.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    return list(csv.reader(io.StringIO(text)))


class TestClassify:
    def test_fast_default(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "27", "--map", "cr3")
        assert code == 0
        assert "label=1" in out and "path=fast" in out

    def test_direct_reports_steps(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "27", "--map", "cr3", "--path", "direct")
        assert code == 0
        assert "label=1" in out and "steps=38" in out and "path=direct" in out

    def test_pdcr2_fixed_point(self, capsys):
        code, out, _ = run_cli(capsys, "classify", "1", "--map", "pdcr2")
        assert code == 0
        assert "label=1" in out

    def test_zero_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "0"])
        assert exc.value.code == 2

    def test_sign_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["classify", "+5"])
        assert exc.value.code == 2

    def test_whitespace_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["classify", " 5"])
        assert exc.value.code == 2

    def test_beyond_range_rejected(self):
        with pytest.raises(SystemExit) as exc:
            main(["classify", str(2**128)])
        assert exc.value.code == 2

    def test_overflowing_trajectory_is_anomaly(self, capsys):
        code, _, err = run_cli(capsys, "classify", str(2**128 - 1), "--path", "direct")
        assert code == 1
        assert "128-bit" in err


class TestTrace:
    def test_cr_from_three(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "3", "--map", "cr")
        assert code == 0
        assert out.splitlines()[0] == "3 10 5 16 8 4 2 1"
        assert "reached_one" in out

    def test_cr3_fixed_point(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "4", "--map", "cr3")
        assert code == 0
        assert out.splitlines()[0] == "4 4"
        assert "reached_fixed_point" in out

    def test_pdcr_from_three(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "3", "--map", "pdcr")
        assert code == 0
        assert out.splitlines()[0] == "3 5 8 4 2 1"

    def test_budget_is_reported_not_fatal(self, capsys):
        code, out, _ = run_cli(capsys, "trace", "27", "--map", "cr", "--max-steps", "5")
        assert code == 0
        assert "budget_exhausted" in out


class TestCensusCommand:
    def test_table_smallest(self, capsys):
        code, out, _ = run_cli(capsys, "census", "1", "--map", "cr3")
        assert code == 0
        assert "S=1" in out

    def test_pdcr2_ten_csv(self, capsys):
        code, out, _ = run_cli(capsys, "census", "10", "--map", "pdcr2", "--format", "csv")
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["S", "map", "class", "count", "fraction"]
        assert rows[1] == ["10", "pdcr2", "1", "4", "0.400000"]
        assert rows[2] == ["10", "pdcr2", "2", "6", "0.600000"]

    def test_csv_and_json_agree(self, capsys):
        _, csv_out, _ = run_cli(capsys, "census", "5000", "--format", "csv")
        _, json_out, _ = run_cli(capsys, "census", "5000", "--format", "json")
        rows = parse_csv(csv_out)[1:]
        doc = json.loads(json_out)
        assert doc["S"] == 5000 and doc["map"] == "cr3"
        for row, entry in zip(rows, doc["classes"]):
            assert row[2] == str(entry["class"])
            assert row[3] == str(entry["count"])
            assert row[4] == entry["fraction"]

    def test_reinvocation_deterministic(self, capsys):
        _, first, _ = run_cli(capsys, "census", "3000", "--format", "csv",
                              "--chunk-size", "100", "--workers", "4")
        _, second, _ = run_cli(capsys, "census", "3000", "--format", "csv",
                               "--chunk-size", "17", "--workers", "1")
        assert first == second  # csv carries no engine metadata

    def test_json_exact_ratio(self, capsys):
        _, out, _ = run_cli(capsys, "census", "10", "--format", "json")
        doc = json.loads(out)
        by_class = {e["class"]: e for e in doc["classes"]}
        assert by_class[1]["exact"] == "3/10"
        assert by_class[2]["exact"] == "2/5"

    def test_checkpoint_written_and_resumable(self, capsys, tmp_path):
        path = tmp_path / "run.ckpt"
        code, first, _ = run_cli(
            capsys, "census", "2000", "--checkpoint", str(path), "--format", "csv"
        )
        assert code == 0
        saved = json.loads(path.read_text())
        assert saved["next_n"] == 2001
        code, resumed, _ = run_cli(
            capsys, "census", "2000", "--checkpoint", str(path), "--resume",
            "--format", "csv",
        )
        assert code == 0
        assert resumed == first

    def test_resume_without_checkpoint_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "census", "100", "--resume")
        assert code == 2
        assert "--checkpoint" in err

    def test_resume_mismatch_is_anomaly(self, capsys, tmp_path):
        path = tmp_path / "run.ckpt"
        run_cli(capsys, "census", "100", "--checkpoint", str(path))
        code, _, err = run_cli(
            capsys, "census", "200", "--checkpoint", str(path), "--resume"
        )
        assert code == 1
        assert "S=" in err

    def test_missing_checkpoint_is_anomaly(self, capsys, tmp_path):
        code, _, err = run_cli(
            capsys, "census", "100", "--checkpoint", str(tmp_path / "no.ckpt"), "--resume"
        )
        assert code == 1
        assert "checkpoint" in err.lower()


class TestSeriesCommand:
    def test_linear_two_points_csv(self, capsys):
        code, out, _ = run_cli(
            capsys, "series", "10", "--points", "2", "--spacing", "linear",
            "--format", "csv",
        )
        assert code == 0
        rows = parse_csv(out)
        assert rows[0] == ["S", "class", "fraction"]
        assert ["5", "1", "0.200000"] in rows
        assert ["10", "1", "0.300000"] in rows
        assert ["10", "2", "0.400000"] in rows
        assert ["10", "4", "0.300000"] in rows

    def test_single_point_trivial_universe(self, capsys):
        code, out, _ = run_cli(capsys, "series", "1", "--points", "1", "--format", "csv")
        assert code == 0
        assert ["1", "1", "1.000000"] in parse_csv(out)

    def test_json_matches_csv(self, capsys):
        _, csv_out, _ = run_cli(capsys, "series", "100", "--points", "2", "--format", "csv")
        _, json_out, _ = run_cli(capsys, "series", "100", "--points", "2", "--format", "json")
        doc = json.loads(json_out)
        csv_rows = {(r[0], r[1]): r[2] for r in parse_csv(csv_out)[1:]}
        for point in doc["points"]:
            for label, fraction in point["fractions"].items():
                assert csv_rows[(str(point["S"]), label)] == fraction

    def test_too_many_points_is_usage_error(self, capsys):
        code, _, err = run_cli(capsys, "series", "5", "--points", "6")
        assert code == 2
        assert "points" in err


class TestVerifyCommand:
    def test_cr3(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "2000", "--map", "cr3")
        assert code == 0
        assert "0 mismatches" in out

    def test_pdcr2_trivial(self, capsys):
        code, out, _ = run_cli(capsys, "verify", "1", "--map", "pdcr2")
        assert code == 0
        assert "0 mismatches" in out

    def test_base_map_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["verify", "10000", "--map", "cr"])
        assert exc.value.code == 2
