import csv
import json

import numpy as np
import pytest

from conceptrank import load_explanation
from conceptrank.cli import main
from conftest import make_graph, make_model, model_to_dict


def read_csv(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#")  # schema version comment
    rows = list(csv.reader(lines[1:]))
    return rows[0], rows[1:]


class TestExplainCommand:
    def test_defaults_and_output(self, toy_files, tmp_path):
        model_path, graph_path = toy_files
        out = tmp_path / "expl.json"
        code = main([
            "explain", "--model", str(model_path), "--graph", str(graph_path),
            "--output", str(out), "--seed", "7",
        ])
        assert code == 0
        obj = load_explanation(out)
        assert obj["meta"]["L"] == 15 and obj["meta"]["p"] == 0.2

    def test_default_output_path(self, toy_files):
        model_path, graph_path = toy_files
        code = main(["explain", "--model", str(model_path), "--graph", str(graph_path)])
        assert code == 0
        assert graph_path.with_name("toy_graph.explanation.json").exists()

    def test_missing_model_names_path(self, toy_files, capsys):
        _, graph_path = toy_files
        code = main(["explain", "--model", "/nope/m.json", "--graph", str(graph_path)])
        assert code == 2
        assert "/nope/m.json" in capsys.readouterr().err

    def test_byte_identical_across_runs_and_workers(self, toy_files, tmp_path):
        model_path, graph_path = toy_files
        blobs = []
        for name, workers in (("a", "1"), ("b", "1"), ("c", "4")):
            out = tmp_path / f"{name}.json"
            assert main([
                "explain", "--model", str(model_path), "--graph", str(graph_path),
                "--output", str(out), "--seed", "7", "--L", "6", "--p", "0.25",
                "--workers", workers,
            ]) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1] == blobs[2]

    def test_invalid_config_rejected_before_compute(self, toy_files, capsys):
        model_path, graph_path = toy_files
        assert main([
            "explain", "--model", str(model_path), "--graph", str(graph_path), "--L", "1",
        ]) == 2
        assert main([
            "explain", "--model", str(model_path), "--graph", str(graph_path), "--p", "1.5",
        ]) == 2

    def test_runtime_error_exit_one(self, toy_files, tmp_path, capsys):
        # Valid files, but feature width disagrees with the model: passes
        # validation, fails inside the pipeline.
        _, graph_path = toy_files
        bad_model = tmp_path / "bad_model.json"
        bad_model.write_text(json.dumps(model_to_dict(make_model(seed=0, feature_dim=9))))
        code = main(["explain", "--model", str(bad_model), "--graph", str(graph_path)])
        assert code == 1
        assert "prior" in capsys.readouterr().err


class TestMetricsCommand:
    @pytest.fixture()
    def explained(self, toy_files, tmp_path):
        model_path, graph_path = toy_files
        out = tmp_path / "expl.json"
        main([
            "explain", "--model", str(model_path), "--graph", str(graph_path),
            "--output", str(out), "--seed", "3", "--L", "5",
        ])
        return model_path, graph_path, out

    def test_appends_report_and_prints_lines(self, explained, capsys):
        model_path, graph_path, out = explained
        code = main([
            "metrics", "--model", str(model_path), "--graph", str(graph_path),
            "--explanation", str(out), "--inf-samples", "32", "--seed", "1",
        ])
        assert code == 0
        printed = capsys.readouterr().out.splitlines()
        assert printed[0].startswith("entropy ")
        assert printed[1].startswith("infidelity_gaussian ") and "±" in printed[1]
        assert printed[2].startswith("infidelity_unit ") and "±" not in printed[2]
        obj = json.loads(out.read_text())
        assert "metrics" in obj and obj["metrics"]["samples"] == 32

    def test_standalone_output(self, explained, tmp_path):
        model_path, graph_path, out = explained
        report_path = tmp_path / "report.json"
        code = main([
            "metrics", "--model", str(model_path), "--graph", str(graph_path),
            "--explanation", str(out), "--inf-samples", "8",
            "--output", str(report_path),
        ])
        assert code == 0
        report = json.loads(report_path.read_text())
        assert set(report) == {
            "entropy", "infidelity_gaussian", "infidelity_gaussian_stderr",
            "infidelity_unit", "samples", "seed",
        }
        assert "metrics" not in json.loads(out.read_text())

    def test_uniform_relevance_fixture_entropy(self, tmp_path, capsys):
        # Hand-built explanation with uniform relevance on 8 nodes: the
        # entropy line must print ln 8.
        from conceptrank import save_graph
        from conceptrank.util import canonical_json

        g = make_graph(seed=9, n=8, extra_edges=2, d=4)
        graph_path = tmp_path / "g8.json"
        save_graph(g, graph_path)
        model_path = tmp_path / "m.json"
        model_path.write_text(json.dumps(model_to_dict(make_model(seed=9))))
        uniform = [1.0 / 8] * 8
        expl_path = tmp_path / "uniform.json"
        expl_path.write_text(canonical_json({
            "xi": [uniform], "node_relevance": uniform, "r": [1.0],
            "concepts": [list(range(8))], "meta": {},
        }))
        code = main([
            "metrics", "--model", str(model_path), "--graph", str(graph_path),
            "--explanation", str(expl_path), "--perturbation", "unit",
        ])
        assert code == 0
        entropy_line = capsys.readouterr().out.splitlines()[0]
        assert abs(float(entropy_line.split()[1]) - np.log(8)) < 1e-9

    def test_shape_mismatch_is_validation_error(self, explained, tmp_path, capsys):
        model_path, _, out = explained
        from conceptrank import save_graph

        other = tmp_path / "other.json"
        save_graph(make_graph(seed=1, n=7), other)
        code = main([
            "metrics", "--model", str(model_path), "--graph", str(other),
            "--explanation", str(out),
        ])
        assert code == 2


class TestSweepCommand:
    def test_l_sweep_row_count(self, toy_files, toy_dataset, tmp_path, capsys):
        model_path, _ = toy_files
        out = tmp_path / "sweep.csv"
        code = main([
            "sweep", "--model", str(model_path), "--dataset", str(toy_dataset),
            "--param", "L", "--grid", "3,4", "--repeats", "2",
            "--inf-samples", "8", "--shapley-samples", "16", "--output", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert header == [
            "dataset", "graph_id", "param_value", "repeat",
            "entropy", "infd_gauss", "infd_unit", "wallclock_s",
        ]
        data = [r for r in rows if not r[1].startswith("__")]
        summaries = [r for r in rows if r[1].startswith("__")]
        assert len(data) == 2 * 4 * 2  # grid x graphs x repeats
        assert len(summaries) == 4  # mean + std per grid value
        assert "relative spread" in capsys.readouterr().out

    def test_summary_mean_matches_rows(self, toy_files, toy_dataset, tmp_path):
        model_path, _ = toy_files
        out = tmp_path / "sweep.csv"
        main([
            "sweep", "--model", str(model_path), "--dataset", str(toy_dataset),
            "--param", "p", "--grid", "0.2,0.3", "--inf-samples", "4",
            "--output", str(out), "--L", "3",
        ])
        _, rows = read_csv(out)
        data = [r for r in rows if not r[1].startswith("__")]
        means = {r[2]: float(r[4]) for r in rows if r[1] == "__mean__"}
        for value in ("0.2", "0.3"):
            block = [float(r[4]) for r in data if r[2] == value]
            assert abs(np.mean(block) - means[value]) < 1e-12

    def test_empty_grid_rejected(self, toy_files, toy_dataset):
        model_path, _ = toy_files
        assert main([
            "sweep", "--model", str(model_path), "--dataset", str(toy_dataset),
            "--param", "L", "--grid", ",",
        ]) == 2

    def test_missing_dataset_rejected(self, toy_files):
        model_path, _ = toy_files
        assert main([
            "sweep", "--model", str(model_path), "--dataset", "/nope",
            "--param", "L", "--grid", "3",
        ]) == 2


class TestBenchmarkCommand:
    def test_rows_and_aggregates(self, toy_files, toy_dataset, tmp_path, capsys):
        model_path, _ = toy_files
        out = tmp_path / "bench.csv"
        code = main([
            "benchmark", "--model", str(model_path), "--dataset", str(toy_dataset),
            "--split", "all", "--L", "4", "--inf-samples", "8", "--output", str(out),
        ])
        assert code == 0
        header, rows = read_csv(out)
        assert "wallclock_s" in header
        data = [r for r in rows if not r[1].startswith("__")]
        assert len(data) == 4
        mean_row = next(r for r in rows if r[1] == "__mean__")
        assert abs(float(mean_row[2]) - np.mean([float(r[2]) for r in data])) < 1e-12
        assert next(r for r in rows if r[1] == "__std__")

    def test_split_filter(self, toy_files, toy_dataset, tmp_path):
        model_path, _ = toy_files
        out = tmp_path / "bench.csv"
        main([
            "benchmark", "--model", str(model_path), "--dataset", str(toy_dataset),
            "--split", "test", "--L", "3", "--inf-samples", "4", "--output", str(out),
        ])
        _, rows = read_csv(out)
        assert len([r for r in rows if not r[1].startswith("__")]) == 2

    def test_per_graph_failure_isolation(self, toy_files, tmp_path):
        # One graph with the wrong feature width must not void the run.
        from conceptrank import save_graph

        model_path, _ = toy_files
        root = tmp_path / "mixed"
        root.mkdir()
        manifest = []
        for k, d in enumerate([4, 4, 9]):
            g = make_graph(seed=k, n=12, extra_edges=4, d=d)
            save_graph(g, root / f"g{k}.json")
            manifest.append({"file": f"g{k}.json", "split": "test"})
        (root / "manifest.json").write_text(json.dumps({"graphs": manifest}))

        out = tmp_path / "bench.csv"
        code = main([
            "benchmark", "--model", str(model_path), "--dataset", str(root),
            "--L", "3", "--inf-samples", "4", "--output", str(out),
        ])
        assert code == 1  # one failure, nonzero exit
        _, rows = read_csv(out)
        assert len([r for r in rows if not r[1].startswith("__")]) == 2

    def test_empty_split_rejected(self, toy_files, tmp_path):
        model_path, _ = toy_files
        root = tmp_path / "empty"
        root.mkdir()
        (root / "manifest.json").write_text(json.dumps({"graphs": []}))
        assert main([
            "benchmark", "--model", str(model_path), "--dataset", str(root),
        ]) == 2
