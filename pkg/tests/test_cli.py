"""End-to-end CLI behavior: files, stdout documents, exit codes."""

import json

import numpy as np
import pytest

import framesel as fs
from conftest import read_json_file, rows_with_cosines, run_cli, unit_rows, write_fixture_manifest
from reference import ref_uniform_positions

HEADER = "type,relevance_only,relevance_oriented,coverage_oriented,coverage_only\n"


@pytest.fixture
def fixture_manifest(tmp_path, rng):
    """Three candidates with raw_relu scores [0.2, 0.9, 0.5]."""
    return write_fixture_manifest(
        tmp_path,
        rows_with_cosines([0.2, 0.9, 0.5]),
        unit_rows(rng, 3, 4),
        np.array([[1.0, 0.0]]),
    )


@pytest.fixture
def routing_files(tmp_path):
    """A trained model file and a routing table mapping count to relevance_oriented."""
    data = tmp_path / "train.tsv"
    lines = []
    for i in range(30):
        lines.append(f"count\thow many items appear {i}")
        lines.append(f"needle\tfind the exact moment {i}")
    data.write_text("\n".join(lines) + "\n", encoding="utf-8")
    model = tmp_path / "model.json"
    assert run_cli(["train-classifier", "--data", data, "--out", model, "--quiet"]) == (0, "", "")

    accuracy = tmp_path / "acc.csv"
    accuracy.write_text(
        HEADER + "count,0.5,0.9,0.2,0.1\nneedle,0.9,0.5,0.2,0.1\n", encoding="utf-8"
    )
    routing = tmp_path / "routing.json"
    assert run_cli(["fit-routing", "--accuracy", accuracy, "--out", routing, "--quiet"]) == (0, "", "")
    return model, routing


class TestPool:
    def test_writes_manifest_file(self, tmp_path, capsys):
        out = tmp_path / "pool.json"
        code, stdout, stderr = run_cli(
            ["pool", "--fps", 2, "--frames", 10, "--out", out], capsys
        )
        assert (code, stderr) == (0, "")
        assert "wrote" in stdout
        doc = read_json_file(out)
        assert doc["seconds"] == [0, 1, 2, 3, 4]

    def test_stdout_mode_prints_the_manifest(self, capsys):
        code, stdout, _ = run_cli(["pool", "--fps", 2, "--frames", 10], capsys)
        assert code == 0
        assert json.loads(stdout)["seconds"] == [0, 1, 2, 3, 4]

    def test_downsampled_pool(self, capsys):
        code, stdout, _ = run_cli(["pool", "--fps", 25, "--frames", 30000], capsys)
        doc = json.loads(stdout)
        assert code == 0 and len(doc["seconds"]) == 1000 and doc["seconds"][-1] == 1199

    def test_zero_duration_exits_four(self, capsys):
        code, _, stderr = run_cli(["pool", "--fps", 30, "--frames", 15], capsys)
        assert code == 4
        assert stderr.startswith("error:4:")
        assert stderr.count("\n") == 1

    def test_repeated_runs_are_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_cli(["pool", "--fps", 23.976, "--frames", 500000, "--out", a, "--quiet"])
        run_cli(["pool", "--fps", 23.976, "--frames", 500000, "--out", b, "--quiet"])
        assert a.read_bytes() == b.read_bytes()


class TestSelect:
    def test_relevance_only_top_two(self, fixture_manifest, tmp_path, capsys):
        out = tmp_path / "sel.json"
        code, _, stderr = run_cli(
            [
                "select", "--manifest", fixture_manifest, "--preset", "relevance_only",
                "--k", 2, "--out", out, "--quiet",
            ],
            capsys,
        )
        assert (code, stderr) == (0, "")
        doc = read_json_file(out)
        assert doc["positions"] == [2, 3]
        assert doc["preset"]["name"] == "relevance_only"
        assert doc["budget"] == 2

    def test_zero_budget_exits_four(self, fixture_manifest, capsys):
        code, _, stderr = run_cli(
            ["select", "--manifest", fixture_manifest, "--preset", "relevance_only", "--k", 0],
            capsys,
        )
        assert code == 4 and stderr.startswith("error:4:")

    def test_lazy_engine_output_is_byte_identical(self, fixture_manifest, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        base = ["select", "--manifest", fixture_manifest, "--preset", "coverage_oriented", "--k", 2, "--quiet"]
        assert run_cli(base + ["--out", a]) == (0, "", "")
        assert run_cli(base + ["--engine", "lazy", "--out", b]) == (0, "", "")
        assert a.read_bytes() == b.read_bytes()

    def test_auto_preset_records_routed_preset(self, fixture_manifest, routing_files, tmp_path, capsys):
        model, routing = routing_files
        out = tmp_path / "sel.json"
        code, _, stderr = run_cli(
            [
                "select", "--manifest", fixture_manifest, "--preset", "auto",
                "--model", model, "--routing", routing,
                "--question", "how many red cars appear in total",
                "--k", 2, "--out", out, "--quiet",
            ],
            capsys,
        )
        assert (code, stderr) == (0, "")
        doc = read_json_file(out)
        assert doc["preset"]["name"] == "relevance_oriented"
        assert doc["preset"]["alpha"] == 1.0 and doc["preset"]["beta"] == 0.5

    def test_auto_preset_type_bypass(self, fixture_manifest, routing_files, tmp_path):
        _, routing = routing_files
        out = tmp_path / "sel.json"
        code, _, _ = run_cli(
            [
                "select", "--manifest", fixture_manifest, "--preset", "auto",
                "--routing", routing, "--type", "needle", "--k", 1, "--out", out, "--quiet",
            ]
        )
        assert code == 0
        assert read_json_file(out)["preset"]["name"] == "relevance_only"

    def test_auto_without_routing_exits_four(self, fixture_manifest, capsys):
        code, _, stderr = run_cli(
            ["select", "--manifest", fixture_manifest, "--preset", "auto", "--k", 1], capsys
        )
        assert code == 4 and stderr.startswith("error:4:")

    def test_corrupt_manifest_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{", encoding="utf-8")
        code, _, stderr = run_cli(
            ["select", "--manifest", bad, "--preset", "relevance_only", "--k", 1], capsys
        )
        assert code == 2 and stderr.startswith("error:2:")

    def test_row_mismatch_exits_three(self, fixture_manifest, tmp_path, rng, capsys):
        fs.write_embedding_file(tmp_path / "semantic.fsel", rng.normal(size=(2, 4)))
        code, _, stderr = run_cli(
            ["select", "--manifest", fixture_manifest, "--preset", "relevance_only", "--k", 1],
            capsys,
        )
        assert code == 3 and stderr.startswith("error:3:")

    def test_unknown_flag_exits_four(self, capsys):
        code, _, stderr = run_cli(["select", "--bogus", "1"], capsys)
        assert code == 4 and stderr.startswith("error:4:")

    def test_result_loadable_by_library(self, fixture_manifest, tmp_path):
        out = tmp_path / "sel.json"
        run_cli(
            ["select", "--manifest", fixture_manifest, "--preset", "coverage_only",
             "--k", 2, "--out", out, "--quiet"]
        )
        result = fs.read_selection_result(out)
        assert len(result.positions) == 2
        assert result.video_id == "fixture"


class TestCompare:
    def test_greedy_dominates_uniform(self, fixture_manifest, tmp_path):
        out = tmp_path / "cmp.json"
        code, _, _ = run_cli(
            ["compare", "--manifest", fixture_manifest, "--preset", "coverage_oriented",
             "--k", 2, "--out", out, "--quiet"]
        )
        assert code == 0
        doc = read_json_file(out)
        assert doc["greedy"]["objective"] >= doc["uniform"]["objective"] - 1e-9
        assert doc["uniform"]["positions"] == list(ref_uniform_positions(3, 2))
        for key in ("relevance", "coverage", "objective"):
            assert doc["delta"][key] == pytest.approx(
                doc["greedy"][key] - doc["uniform"][key], abs=1e-12
            )

    def test_full_budget_rows_are_identical(self, fixture_manifest, tmp_path):
        out = tmp_path / "cmp.json"
        run_cli(
            ["compare", "--manifest", fixture_manifest, "--preset", "relevance_oriented",
             "--k", 3, "--out", out, "--quiet"]
        )
        doc = read_json_file(out)
        assert doc["greedy"] == doc["uniform"]
        assert doc["delta"] == {"relevance": 0.0, "coverage": 0.0, "objective": 0.0}

    def test_duplicate_cluster_coverage_gap(self, tmp_path, capsys):
        # one dense duplicate cluster plus isolated outliers: uniform wastes
        # picks inside the cluster, greedy covers the outliers too
        sem = np.array(
            [[1.0, 0.0, 0.0]] * 6 + [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]
        )
        manifest = write_fixture_manifest(
            tmp_path,
            unit_rows(np.random.default_rng(0), 8, 4),
            sem,
            np.array([[1.0, 0.0, 0.0, 0.0]]),
        )
        out = tmp_path / "cmp.json"
        code, _, _ = run_cli(
            ["compare", "--manifest", manifest, "--preset", "coverage_only",
             "--k", 3, "--out", out, "--quiet"],
            capsys,
        )
        assert code == 0
        doc = read_json_file(out)
        assert doc["greedy"]["coverage"] > doc["uniform"]["coverage"]


class TestOracleAndProps:
    def test_oracle_stream_and_determinism(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        base = ["oracle", "--n", 8, "--k", 3, "--trials", 25, "--seed", 5, "--quiet"]
        assert run_cli(base + ["--out", a]) == (0, "", "")
        assert run_cli(base + ["--out", b]) == (0, "", "")
        assert a.read_bytes() == b.read_bytes()
        lines = a.read_text(encoding="utf-8").splitlines()
        assert len(lines) == 25
        for line in lines:
            doc = json.loads(line)
            assert doc["ratio"] >= fs.GREEDY_RATIO_BOUND - 1e-9
            assert doc["n"] <= 8 and doc["k"] <= 3

    def test_oracle_too_large_exits_four(self, capsys):
        code, _, stderr = run_cli(["oracle", "--n", 25], capsys)
        assert code == 4 and stderr.startswith("error:4:")

    def test_props_pass(self, tmp_path, capsys):
        out = tmp_path / "props.json"
        code, _, stderr = run_cli(
            ["props", "--trials", 60, "--seed", 1, "--out", out, "--quiet"], capsys
        )
        assert (code, stderr) == (0, "")
        doc = read_json_file(out)
        assert doc["passed"] is True and doc["failures"] == 0
        assert doc["checks"]["submodularity"] == 60


class TestRoutingCommands:
    def test_fit_routing_missing_column_exits_two(self, tmp_path, capsys):
        bad = tmp_path / "acc.csv"
        bad.write_text(
            "type,relevance_only,relevance_oriented,coverage_oriented\ncount,0.5,0.9,0.2\n",
            encoding="utf-8",
        )
        code, _, stderr = run_cli(["fit-routing", "--accuracy", bad], capsys)
        assert code == 2 and stderr.startswith("error:2:")

    def test_route_question(self, routing_files, tmp_path, capsys):
        model, routing = routing_files
        code, stdout, _ = run_cli(
            ["route", "--model", model, "--routing", routing,
             "--question", "how many people appear"],
            capsys,
        )
        assert code == 0
        doc = json.loads(stdout)
        assert doc["type"] == "count"
        assert doc["preset"]["name"] == "relevance_oriented"
        assert doc["preset"] == {
            "name": "relevance_oriented", "alpha": 1.0, "beta": 0.5, "lambda": 0.5,
        }

    def test_route_type_bypass(self, routing_files, capsys):
        _, routing = routing_files
        code, stdout, _ = run_cli(
            ["route", "--routing", routing, "--type", "needle", "--lambda", 0.3], capsys
        )
        assert code == 0
        doc = json.loads(stdout)
        assert doc["type"] == "needle" and doc["preset"]["name"] == "relevance_only"

    def test_route_without_inputs_exits_four(self, routing_files, capsys):
        _, routing = routing_files
        code, _, stderr = run_cli(["route", "--routing", routing], capsys)
        assert code == 4 and stderr.startswith("error:4:")

    def test_trained_model_file_round_trips(self, routing_files, tmp_path):
        model_path, _ = routing_files
        model = fs.read_model(model_path)
        again = tmp_path / "again.json"
        fs.write_model(model, again)
        assert again.read_bytes() == model_path.read_bytes()


def test_every_error_line_is_machine_parseable(tmp_path, capsys):
    failing_invocations = [
        ["pool", "--fps", 30, "--frames", 15],
        ["select", "--manifest", tmp_path / "missing.json", "--preset", "relevance_only"],
        ["oracle", "--n", 25],
        ["fit-routing", "--accuracy", tmp_path / "missing.csv"],
        ["nonsense-subcommand"],
        ["select"],
    ]
    for argv in failing_invocations:
        code, _, stderr = run_cli(argv, capsys)
        assert code in (1, 2, 3, 4), argv
        assert stderr.startswith(f"error:{code}:"), (argv, stderr)
        assert stderr.strip().count("\n") == 0, argv
