"""Tests for the ``circuits`` command line."""

import json

import pytest

from app.cli import EXIT_FAILED, EXIT_INPUT, EXIT_OK, main
from tests import golden


def _write(tmp_path, name: str, text: str) -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def _label_file(labels) -> str:
    return "".join(f"{v} = {label.value}\n" for v, label in sorted(labels.items()))


@pytest.fixture
def eight(tmp_path):
    """(euler file, partition file) for the eight-vertex example."""
    return (
        _write(tmp_path, "eight.dow", golden.EIGHT),
        _write(tmp_path, "eight.labels", _label_file(golden.EIGHT_LABELS)),
    )


# ---------------------------------------------------------------------------
# Graph files
# ---------------------------------------------------------------------------


class TestParseAndEuler:
    def test_parse_round_trips_dow(self, tmp_path, capsys):
        path = _write(tmp_path, "k5.dow", golden.K5)
        assert main(["parse", path]) == EXIT_OK
        assert capsys.readouterr().out == "dow C: a+ b+ d+ c+ a- e+ c- b- e- d-\n"

    def test_parse_edge_list_as_json(self, tmp_path, capsys):
        path = _write(tmp_path, "loop.txt", "edge v v\nedge v v\n")
        assert main(["parse", path, "--json"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out) == {"edges": [["v", "v"], ["v", "v"]]}

    def test_euler_from_edge_list(self, tmp_path, capsys):
        text = "".join(f"edge {v} {w}\n" for v in "abcde" for w in "abcde" if v < w)
        path = _write(tmp_path, "k5.txt", text)
        assert main(["euler", path]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("dow C: ")
        assert len(out.split()) == 2 + 10

    def test_malformed_input(self, tmp_path, capsys):
        path = _write(tmp_path, "bad.dow", "dow C: a b a b\nfoo bar\n")
        assert main(["parse", path]) == EXIT_INPUT
        err = capsys.readouterr().err
        assert "line 2" in err

    def test_undecodable_bytes(self, tmp_path, capsys):
        path = tmp_path / "binary.dow"
        path.write_bytes(b"\xff\xfe dow C: a b a b\n")
        assert main(["parse", str(path)]) == EXIT_INPUT
        assert "not UTF-8" in capsys.readouterr().err

    def test_invalid_partition_bytes(self, tmp_path, eight):
        euler, _ = eight
        labels = tmp_path / "bad.labels"
        labels.write_bytes(b"a = \xff\n")
        assert main(["matrix", "--standard", "--euler", euler, "--partition", str(labels)]) == EXIT_INPUT

    def test_missing_file(self, tmp_path):
        assert main(["parse", str(tmp_path / "nope.dow")]) == EXIT_INPUT


# ---------------------------------------------------------------------------
# Partitions and matrices
# ---------------------------------------------------------------------------


class TestMatrix:
    def test_standard_form_tsv(self, eight, capsys):
        euler, labels = eight
        assert main(["matrix", "--standard", "--euler", euler, "--partition", labels]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == "\ta\tb\tc\td\te\tf\tg\th"
        assert lines[1] == "a\t1\t1\t0\t0\t1\t2\t-1\t1"
        assert len(lines) == 9

    def test_standard_form_json(self, eight, capsys):
        euler, labels = eight
        assert main(["matrix", "--tracing", "--json", "--euler", euler, "--partition", labels]) == EXIT_OK
        record = json.loads(capsys.readouterr().out)
        assert record["entries"] == [list(row) for row in golden.EIGHT_STANDARD]

    def test_gf2_hex(self, tmp_path, capsys):
        euler = _write(tmp_path, "loop.dow", golden.LOOP)
        assert main(["matrix", "--interlacement", "--hex", "--euler", euler]) == EXIT_OK
        assert capsys.readouterr().out == "v\t0\n"

    def test_partition_from_dow(self, tmp_path, capsys):
        euler = _write(tmp_path, "k5.dow", golden.K5_FIRST_SIGNING)
        other = _write(tmp_path, "k5prime.dow", golden.K5_PRIME)
        assert main(["matrix", "--standard", "--json", "--euler", euler, "--partition-dow", other]) == EXIT_OK
        record = json.loads(capsys.readouterr().out)
        assert record["entries"] == [list(row) for row in golden.K5_FIRST_STANDARD]

    def test_partition_required(self, eight):
        euler, _ = eight
        assert main(["matrix", "--standard", "--euler", euler]) == EXIT_INPUT

    def test_partition_name_must_match(self, tmp_path, eight):
        euler, _ = eight
        labels = _write(tmp_path, "named.labels", "a = phi @ other\n")
        assert main(["matrix", "--standard", "--euler", euler, "--partition", labels]) == EXIT_INPUT

    def test_trace_and_touch(self, eight, capsys):
        euler, labels = eight
        assert main(["trace", "--euler", euler, "--partition", labels]) == EXIT_OK
        circuits = capsys.readouterr().out.splitlines()
        assert [line.split("\t")[0] for line in circuits] == ["P0", "P1", "P2", "P3"]
        assert main(["touch", "--euler", euler, "--partition", labels]) == EXIT_OK
        touch = capsys.readouterr().out.splitlines()
        assert touch[0] == "vertex\ttail\thead\tflag"
        assert touch[1].startswith("a\t") and touch[1].endswith("loop")


# ---------------------------------------------------------------------------
# Verification
# ---------------------------------------------------------------------------


class TestVerify:
    def test_main_over_all_partitions(self, tmp_path, capsys):
        euler = _write(tmp_path, "tri.dow", golden.DOUBLED_TRIANGLE)
        assert main(["verify", "--main", "--all-partitions", "--euler", euler, "--workers", "1"]) == EXIT_OK
        assert capsys.readouterr().out.startswith("main\t27/27 passed")

    def test_sweep_prints_a_row_per_partition(self, tmp_path, capsys):
        euler = _write(tmp_path, "tri.dow", golden.DOUBLED_TRIANGLE)
        assert main(["verify", "--main", "--all-partitions", "--euler", euler, "--workers", "1"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[1] == "partition\tstatus\tP\tnullity\trank"
        rows = lines[2:]
        assert len(rows) == 3**3
        assert "φφφ\tPASS\t1\t0\t3" in rows
        assert "ψψψ\tPASS\t3\t2\t1" in rows

    def test_single_partition_report(self, eight, capsys):
        euler, labels = eight
        assert main(["verify", "--nullity", "--euler", euler, "--partition", labels]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.startswith("# nullity eight")
        assert "FAIL" not in out

    def test_detzero_rejects_psi(self, eight):
        euler, labels = eight
        assert main(["verify", "--detzero", "--euler", euler, "--partition", labels]) == EXIT_INPUT

    def test_naturality_with_random_steps(self, tmp_path):
        euler = _write(tmp_path, "k5.dow", golden.K5)
        other = _write(tmp_path, "k5prime.dow", golden.K5_PRIME)
        argv = [
            "verify", "--naturality", "--vertex", "a", "--euler", euler,
            "--partition-dow", other, "--steps", "3", "--seed", "11",
        ]
        assert main(argv) == EXIT_OK

    def test_transposition_rows(self, tmp_path, capsys):
        euler = _write(tmp_path, "c.dow", golden.TRANSPOSITION_C)
        argv = ["verify", "--transposition", "--pair", "c", "d", "--all-partitions", "--euler", euler]
        assert main(argv) == EXIT_OK
        assert capsys.readouterr().out.startswith("transposition\t32/32 passed")

    def test_real_needs_other(self, eight):
        euler, labels = eight
        assert main(["verify", "--real", "--euler", euler, "--partition", labels]) == EXIT_INPUT

    @pytest.mark.parametrize("check", ["--indicator", "--signs"])
    def test_whole_graph_checks(self, tmp_path, check):
        euler = _write(tmp_path, "tri.dow", golden.DOUBLED_TRIANGLE)
        assert main(["verify", check, "--euler", euler]) == EXIT_OK


# ---------------------------------------------------------------------------
# Counting, census and transforms
# ---------------------------------------------------------------------------


class TestCount:
    def test_loop(self, tmp_path, capsys):
        euler = _write(tmp_path, "loop.dow", golden.LOOP)
        assert main(["count", "--euler", euler]) == EXIT_OK
        assert capsys.readouterr().out == "det\t1\nbrute\t1\n"

    def test_brute_force_skipped_over_cap(self, tmp_path, capsys):
        euler = _write(tmp_path, "k5.dow", golden.K5)
        assert main(["count", "--json", "--brute-max", "2", "--euler", euler]) == EXIT_OK
        record = json.loads(capsys.readouterr().out)
        assert record["brute"] is None
        assert record["agree"] is None

    def test_census(self, tmp_path, capsys):
        path = _write(tmp_path, "tri.dow", golden.DOUBLED_TRIANGLE)
        assert main(["census", path, "--workers", "1"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "total\t27" in out
        assert out.endswith("nullity_failures\t0\n")

    def test_census_cap(self, tmp_path):
        path = _write(tmp_path, "k5.dow", golden.K5)
        assert main(["census", path, "--max-vertices", "3"]) == EXIT_INPUT


class TestTransform:
    def test_kappa(self, tmp_path, capsys):
        euler = _write(tmp_path, "k5.dow", golden.K5)
        assert main(["transform", "--kappa", "a", "--euler", euler]) == EXIT_OK
        out = capsys.readouterr().out
        assert out.count("# reverse C") == 2

    def test_transpose(self, tmp_path, capsys):
        euler = _write(tmp_path, "c.dow", golden.TRANSPOSITION_C)
        assert main(["transform", "--transpose", "c", "d", "--euler", euler]) == EXIT_OK
        assert capsys.readouterr().out.startswith("dow C: ")

    def test_transpose_not_interlaced(self, tmp_path):
        euler = _write(tmp_path, "k5.dow", golden.K5)
        assert main(["transform", "--transpose", "a", "e", "--euler", euler]) == EXIT_INPUT

    def test_path(self, tmp_path, capsys):
        euler = _write(tmp_path, "k5.dow", golden.K5)
        target = _write(tmp_path, "k5prime.dow", golden.K5_PRIME)
        assert main(["transform", "--path", target, "--euler", euler]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("# ")
        assert lines[1] == "a b d c a e c b e d"

    def test_failed_verification_exit_code_is_distinct(self):
        assert EXIT_FAILED not in (EXIT_OK, EXIT_INPUT)
