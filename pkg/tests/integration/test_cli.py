import json
from pathlib import Path

import pytest

from app.cli import EXIT_LEGALITY, EXIT_MISMATCH, EXIT_OK, EXIT_RUNTIME, main
from app.services.report import load_plan

CORPUS = [("basic_n3.json", 45), ("optimized_n3.json", 25), ("improved_n3.json", 23)]


def write_json(path: Path, value) -> str:
    path.write_text(json.dumps(value), encoding="utf-8")
    return str(path)


class TestPlanCommand:
    """Tests for `rcsim plan`."""

    def test_basic_plan(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test a 3-tap basic plan on a 3x3 array."""
        out = tmp_path / "bm.json"

        code = main(["plan", "--mapping", "basic", "--taps", "3", "--array", "3x3", "--horizon", "9", "-o", str(out)])

        assert code == EXIT_OK
        plan = load_plan(out)
        assert len(plan.assignment) == 3
        assert plan.horizon == 9
        assert "wrote BM plan (3 taps, 3 context words, horizon 9)" in capsys.readouterr().out

    def test_explicit_weights(self, tmp_path: Path):
        """Test that --weights fixes the taps."""
        weights = write_json(tmp_path / "w.json", [3, -2, 5])
        out = tmp_path / "om.json"

        code = main(
            ["plan", "--mapping", "optimized", "--weights", weights, "--array", "8x8", "--horizon", "5", "-o", str(out)]
        )

        assert code == EXIT_OK
        assert load_plan(out).taps == [3, -2, 5]

    def test_seeded_weights_are_reproducible(self, tmp_path: Path):
        """Test that the same seed draws the same taps."""
        for name in ("a.json", "b.json"):
            main(["plan", "--mapping", "basic", "--taps", "4", "--seed", "11", "--horizon", "4", "-o", str(tmp_path / name)])

        assert load_plan(tmp_path / "a.json").taps == load_plan(tmp_path / "b.json").taps

    def test_degenerate_plan(self, tmp_path: Path):
        """Test an order-1 optimized plan on a single cell."""
        out = tmp_path / "one.json"

        code = main(["plan", "--mapping", "optimized", "--taps", "1", "--array", "1x1", "--horizon", "3", "-o", str(out)])

        assert code == EXIT_OK
        assert len(load_plan(out).extraction) == 3

    def test_improved_too_large(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that eight taps on 8x8 fail legality with the row constraint."""
        out = tmp_path / "im.json"

        code = main(
            ["plan", "--mapping", "improved", "--taps", "8", "--array", "8x8", "--diagonal", "--horizon", "5", "-o", str(out)]
        )

        assert code == EXIT_LEGALITY
        assert "at most 7 taps" in capsys.readouterr().err
        assert not out.exists()

    def test_improved_without_diagonal(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that the improved mapping needs --diagonal."""
        code = main(["plan", "--mapping", "improved", "--taps", "3", "--horizon", "5", "-o", str(tmp_path / "im.json")])

        assert code == EXIT_LEGALITY
        assert "lower left" in capsys.readouterr().err

    def test_empty_weights_file(self, tmp_path: Path):
        """Test that an empty weights file is a runtime error."""
        weights = write_json(tmp_path / "w.json", [])

        code = main(["plan", "--mapping", "basic", "--weights", weights, "--horizon", "3", "-o", str(tmp_path / "p.json")])

        assert code == EXIT_RUNTIME

    def test_bad_array_shape(self, tmp_path: Path):
        """Test that argparse rejects a malformed shape."""
        with pytest.raises(SystemExit) as exc_info:
            main(["plan", "--mapping", "basic", "--taps", "3", "--array", "3by3", "--horizon", "3", "-o", str(tmp_path / "p.json")])

        assert exc_info.value.code == 2


class TestSimulateCommand:
    """Tests for `rcsim simulate`."""

    def test_optimized_trace(self, tmp_path: Path, corpus_dir: Path):
        """Test the symbolic trace row of the first complete optimized output."""
        trace = tmp_path / "trace.csv"
        outputs = tmp_path / "out.json"

        code = main(
            [
                "simulate",
                "--plan", str(corpus_dir / "optimized_n3.json"),
                "--input", str(corpus_dir / "input_40.json"),
                "--cycles", "15",
                "--symbolic",
                "--trace", str(trace),
                "--outputs", str(outputs),
            ]
        )

        assert code == EXIT_OK
        rows = [line.split(",") for line in trace.read_text(encoding="utf-8").splitlines()[1:]]
        assert [r for r in rows if r[:3] == ["3", "0", "2"]][0][5] == "x2w0+x1w1+x0w2"
        assert [o["index"] for o in json.loads(outputs.read_text(encoding="utf-8"))] == list(range(29))

    def test_zero_cycles(self, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that zero cycles print an empty output list."""
        code = main(
            ["simulate", "--plan", str(corpus_dir / "basic_n3.json"), "--input", str(corpus_dir / "input_40.json"), "--cycles", "0"]
        )

        assert code == EXIT_OK
        assert json.loads(capsys.readouterr().out) == []

    def test_improved_five_cycles(self, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that five IM cycles give y0..y7."""
        code = main(
            ["simulate", "--plan", str(corpus_dir / "improved_n3.json"), "--input", str(corpus_dir / "input_40.json"), "--cycles", "5"]
        )

        assert code == EXIT_OK
        assert [o["index"] for o in json.loads(capsys.readouterr().out)] == list(range(8))

    def test_past_horizon(self, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that running past the materialized horizon is a runtime error."""
        code = main(
            ["simulate", "--plan", str(corpus_dir / "improved_n3.json"), "--input", str(corpus_dir / "input_40.json"), "--cycles", "24"]
        )

        assert code == EXIT_RUNTIME
        assert "materialized to 23 cycles" in capsys.readouterr().err

    def test_overflow_names_cell(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test that an overflow is reported with cycle and cell."""
        plan = tmp_path / "p.json"
        weights = write_json(tmp_path / "w.json", [2**62])
        main(["plan", "--mapping", "basic", "--weights", weights, "--array", "1x1", "--horizon", "1", "-o", str(plan)])
        samples = write_json(tmp_path / "x.json", [4])

        code = main(["simulate", "--plan", str(plan), "--input", samples, "--cycles", "1"])

        assert code == EXIT_RUNTIME
        assert "RC(0,0), cycle 1" in capsys.readouterr().err

    def test_bad_input_file(self, tmp_path: Path, corpus_dir: Path):
        """Test that a non-integer input is a runtime error."""
        samples = write_json(tmp_path / "x.json", [1.5, 2])

        code = main(["simulate", "--plan", str(corpus_dir / "basic_n3.json"), "--input", samples, "--cycles", "3"])

        assert code == EXIT_RUNTIME

    def test_missing_plan(self, tmp_path: Path, corpus_dir: Path):
        """Test that a missing plan file is a runtime error."""
        code = main(
            ["simulate", "--plan", str(tmp_path / "nope.json"), "--input", str(corpus_dir / "input_40.json"), "--cycles", "3"]
        )

        assert code == EXIT_RUNTIME


class TestVerifyCommand:
    """Tests for `rcsim verify`."""

    @pytest.mark.parametrize("name,horizon", CORPUS)
    def test_corpus_plans_verify(self, name: str, horizon: int, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that every shipped plan matches the reference on the shipped input."""
        code = main(
            ["verify", "--plan", str(corpus_dir / name), "--input", str(corpus_dir / "input_40.json"), "--cycles", str(horizon)]
        )

        assert code == EXIT_OK
        assert capsys.readouterr().out.startswith("OK: ")

    def test_trim_tail(self, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that tail outputs are counted as skipped."""
        code = main(
            [
                "verify",
                "--plan", str(corpus_dir / "basic_n3.json"),
                "--input", str(corpus_dir / "input_40.json"),
                "--cycles", "45",
                "--trim-tail",
            ]
        )

        assert code == EXIT_OK
        assert "(3 tail skipped)" in capsys.readouterr().out

    def test_text_orientation_mismatch(self, tmp_path: Path, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that swapping the tap orientation is caught by the reference."""
        plan = tmp_path / "text.json"
        weights = write_json(tmp_path / "w.json", [3, -2, 5])
        main(
            [
                "plan", "--mapping", "basic", "--weights", weights, "--array", "3x3",
                "--orientation", "text", "--horizon", "9", "-o", str(plan),
            ]
        )
        capsys.readouterr()

        code = main(["verify", "--plan", str(plan), "--input", str(corpus_dir / "input_40.json"), "--cycles", "9"])

        assert code == EXIT_MISMATCH
        out = capsys.readouterr().out
        assert out.startswith("MISMATCH after")
        assert "y_0 at RC(0,2), cycle 3" in out

    def test_zero_input(self, tmp_path: Path, corpus_dir: Path):
        """Test that an all-zero input verifies."""
        samples = write_json(tmp_path / "zeros.json", [0] * 10)

        code = main(["verify", "--plan", str(corpus_dir / "optimized_n3.json"), "--input", samples, "--cycles", "25"])

        assert code == EXIT_OK

    def test_illegal_plan_file(self, tmp_path: Path, corpus_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that a plan illegal on its array exits with the legality code."""
        document = json.loads((corpus_dir / "improved_n3.json").read_text(encoding="utf-8"))
        document["array"]["diagonal"] = False
        plan = write_json(tmp_path / "bad.json", document)

        code = main(["verify", "--plan", plan, "--input", str(corpus_dir / "input_40.json"), "--cycles", "5"])

        assert code == EXIT_LEGALITY
        assert "RC(0,1)" in capsys.readouterr().err


class TestPerfCommand:
    """Tests for `rcsim perf`."""

    @pytest.mark.parametrize("table_id", ["1", "3", "6"])
    def test_tables_match_golden(self, table_id: str, golden_dir: Path, capsys: pytest.CaptureFixture[str]):
        """Test that CSV output equals the golden files."""
        code = main(["perf", "--table", table_id])

        assert code == EXIT_OK
        assert capsys.readouterr().out == (golden_dir / f"table_{table_id}.csv").read_text(encoding="utf-8")

    def test_fig6_to_file(self, tmp_path: Path, golden_dir: Path):
        """Test the speedup curve written to a file."""
        out = tmp_path / "fig6.csv"

        code = main(["perf", "--fig6", "--orders", "8,16,32,64", "-o", str(out)])

        assert code == EXIT_OK
        assert out.read_text(encoding="utf-8") == (golden_dir / "fig6.csv").read_text(encoding="utf-8")

    def test_text_format(self, capsys: pytest.CaptureFixture[str]):
        """Test the aligned text table."""
        code = main(["perf", "--table", "3", "--format", "text"])

        assert code == EXIT_OK
        out = capsys.readouterr().out
        assert out.splitlines()[0] == "Table 3: Speedup of OM over BM"
        assert "11.12" in out

    def test_measured_rates(self, capsys: pytest.CaptureFixture[str]):
        """Test that --measure appends simulated rates."""
        code = main(["perf", "--table", "4", "--orders", "2,3", "--measure"])

        assert code == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].endswith("bm_measured,im_measured")
        assert lines[1].endswith(",1,2")

    def test_bad_orders(self):
        """Test that non-positive orders are rejected by argparse."""
        with pytest.raises(SystemExit):
            main(["perf", "--table", "1", "--orders", "8,0"])


class TestSweepAndInputCommands:
    """Tests for `rcsim sweep` and `rcsim input`."""

    def test_sweep_rows(self, tmp_path: Path, capsys: pytest.CaptureFixture[str]):
        """Test one row per mapping and order."""
        out = tmp_path / "sweep.csv"

        code = main(["sweep", "--orders", "8,16,32,64", "--kinds", "basic,optimized,improved", "-o", str(out)])

        assert code == EXIT_OK
        lines = out.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 13
        assert all(line.split(",")[7] == "100.00" for line in lines[1:] if line.startswith("improved"))
        assert "wrote 12 rows" in capsys.readouterr().out

    def test_sweep_measured(self, tmp_path: Path):
        """Test that measured rates equal the no-write-back rates."""
        out = tmp_path / "sweep.csv"

        code = main(["sweep", "--orders", "2,3", "--measure", "-o", str(out)])

        assert code == EXIT_OK
        for line in out.read_text(encoding="utf-8").splitlines()[1:]:
            cells = line.split(",")
            assert cells[9] == cells[5]

    def test_unknown_kind(self, tmp_path: Path):
        """Test that unknown mapping names are rejected by argparse."""
        with pytest.raises(SystemExit):
            main(["sweep", "--kinds", "fast", "-o", str(tmp_path / "s.csv")])

    def test_input(self, capsys: pytest.CaptureFixture[str]):
        """Test a seeded random input sequence."""
        code = main(["input", "--length", "6", "--seed", "3", "--limit", "5"])

        assert code == EXIT_OK
        values = json.loads(capsys.readouterr().out)
        assert len(values) == 6
        assert all(-5 <= v <= 5 for v in values)
