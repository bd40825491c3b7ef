import json
import time
from pathlib import Path

import numpy as np
import pytest

from gcn_trainer import (
    DatasetUnavailable,
    TrainConfig,
    export_dataset,
    export_fixtures,
    export_manifest_entry,
    export_model,
    load_tu_dataset,
    split_records,
    toy_cycles_vs_stars,
    train,
)

# The consumer side: everything the trainer emits must load there cleanly.
from conceptrank import forward, load_dataset, load_graph, load_model

TU_ROOT = Path(__file__).resolve().parent.parent / "datasets"


@pytest.fixture(scope="module")
def toy_checkpoint():
    records = toy_cycles_vs_stars(200, seed=0)
    train_recs, test_recs = split_records(records, seed=0)
    t0 = time.perf_counter()
    ckpt = train(train_recs, test_recs, TrainConfig(epochs=300, seed=0))
    ckpt.wallclock_s = time.perf_counter() - t0
    return ckpt, train_recs, test_recs


class TestToyTraining:
    def test_accuracy_and_runtime(self, toy_checkpoint):
        ckpt, _, _ = toy_checkpoint
        print(f"{'PASS' if ckpt.test_accuracy >= 0.95 else 'FAIL'}  "
              f"toy training: test acc {ckpt.test_accuracy:.3f} in {ckpt.wallclock_s:.1f}s")
        assert ckpt.test_accuracy >= 0.95
        assert ckpt.wallclock_s < 120.0

    def test_training_is_seeded(self):
        records = toy_cycles_vs_stars(40, seed=1)
        tr, te = split_records(records, seed=1)
        a = train(tr, te, TrainConfig(epochs=5, seed=3))
        b = train(tr, te, TrainConfig(epochs=5, seed=3))
        assert np.array_equal(
            a.model.head_weight.detach().numpy(), b.model.head_weight.detach().numpy()
        )

    def test_manifest_entry_pins_accuracy(self, toy_checkpoint):
        ckpt, _, _ = toy_checkpoint
        entry = export_manifest_entry(ckpt, "toy")
        assert entry["hidden"] == 64 and entry["learning_rate"] == 1e-4
        assert entry["test_accuracy"] == ckpt.test_accuracy


class TestModelExport:
    def test_export_loads_in_engine(self, toy_checkpoint, tmp_path):
        ckpt, _, _ = toy_checkpoint
        path = export_model(ckpt, tmp_path / "model.json")
        spec = load_model(path)
        assert len(spec.layers) == 2
        assert spec.pooling == "mean"
        assert spec.num_classes == 2

    def test_re_export_is_byte_identical(self, toy_checkpoint, tmp_path):
        ckpt, _, _ = toy_checkpoint
        a = export_model(ckpt, tmp_path / "a.json").read_bytes()
        b = export_model(ckpt, tmp_path / "b.json").read_bytes()
        assert a == b

    def test_concat_pooling_variant_round_trips(self, tmp_path):
        records = toy_cycles_vs_stars(60, seed=2)
        tr, te = split_records(records, seed=2)
        ckpt = train(tr, te, TrainConfig(
            num_layers=4, activation="tanh", pooling="mean_concat_max", epochs=30, seed=2,
        ))
        path = export_model(ckpt, tmp_path / "wide.json")
        spec = load_model(path)
        assert len(spec.layers) == 4 and spec.pooling == "mean_concat_max"

        export_fixtures(ckpt, te, tmp_path / "fix", count=5)
        fixtures = json.loads((tmp_path / "fix" / "fixtures.json").read_text())
        for fx in fixtures:
            g = load_graph(tmp_path / "fix" / fx["graph"])
            engine = forward(spec, g)
            assert np.abs(engine - np.array(fx["probs"])).max() < 1e-5


class TestDatasetExport:
    def test_graphs_pass_primary_validation(self, toy_checkpoint, tmp_path):
        _, train_recs, test_recs = toy_checkpoint
        root = export_dataset(train_recs[:6], test_recs[:4], tmp_path / "ds")
        entries = load_dataset(root)
        assert len(entries) == 10
        assert sum(e.split == "train" for e in entries) == 6

    def test_fixture_count(self, toy_checkpoint, tmp_path):
        ckpt, _, test_recs = toy_checkpoint
        export_fixtures(ckpt, test_recs, tmp_path / "fix", count=10)
        fixtures = json.loads((tmp_path / "fix" / "fixtures.json").read_text())
        assert len(fixtures) == 10


class TestCrossComponentRoundTrip:
    def test_engine_probs_match_trainer_probs(self, toy_checkpoint, tmp_path):
        ckpt, _, test_recs = toy_checkpoint
        model_path = export_model(ckpt, tmp_path / "model.json")
        export_fixtures(ckpt, test_recs, tmp_path / "fix", count=10)

        spec = load_model(model_path)
        fixtures = json.loads((tmp_path / "fix" / "fixtures.json").read_text())
        assert len(fixtures) == 10
        worst = 0.0
        for fx in fixtures:
            g = load_graph(tmp_path / "fix" / fx["graph"])
            engine = forward(spec, g)
            worst = max(worst, float(np.abs(engine - np.array(fx["probs"])).max()))
        print(f"{'PASS' if worst < 1e-5 else 'FAIL'}  cross-component round trip: "
              f"max prob gap {worst:.2e} over 10 fixtures")
        assert worst < 1e-5


class TestTuDatasets:
    def test_missing_dataset_message_names_remedy(self, tmp_path):
        with pytest.raises(DatasetUnavailable, match="manually"):
            load_tu_dataset(tmp_path, "PROTEINS")

    @pytest.mark.skipif(not (TU_ROOT / "PROTEINS").is_dir(),
                        reason="PROTEINS not available locally")
    def test_proteins_trains_and_exports(self, tmp_path):
        records = load_tu_dataset(TU_ROOT, "PROTEINS")
        assert len(records) == 1113
        tr, te = split_records(records, seed=0)
        ckpt = train(tr, te, TrainConfig(epochs=20, seed=0))
        spec = load_model(export_model(ckpt, tmp_path / "proteins.json"))
        assert len(spec.layers) == 2

    @pytest.mark.skipif(not (TU_ROOT / "MSRC_9").is_dir(),
                        reason="MSRC_9 not available locally")
    def test_msrc9_graph_count(self):
        records = load_tu_dataset(TU_ROOT, "MSRC_9")
        assert len(records) == 221
