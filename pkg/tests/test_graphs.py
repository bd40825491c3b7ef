import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conceptrank import (
    EmptyNodeSet,
    FormatError,
    Graph,
    InvalidNodeSet,
    NotAnEdge,
    ValidationError,
    edge_removed,
    induced_subgraph,
    load_dataset,
    load_graph,
    save_graph,
)
from conftest import make_graph


def triangle():
    return Graph(num_nodes=3, edges=[(0, 1), (1, 2), (0, 2)], features=np.eye(3))


class TestGraphConstruction:
    def test_undirected_edges_canonicalized(self):
        g = Graph(num_nodes=3, edges=[(2, 0), (1, 0)], features=np.eye(3))
        assert g.edges == ((0, 1), (0, 2))

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(ValidationError):
            Graph(num_nodes=3, edges=[(0, 5)], features=np.eye(3))

    def test_self_loop_rejected(self):
        with pytest.raises(ValidationError):
            Graph(num_nodes=2, edges=[(1, 1)], features=np.eye(2))

    def test_duplicate_edge_rejected(self):
        with pytest.raises(ValidationError):
            Graph(num_nodes=3, edges=[(0, 1), (1, 0)], features=np.eye(3))

    def test_directed_keeps_both_orientations(self):
        g = Graph(num_nodes=2, edges=[(0, 1), (1, 0)], features=np.eye(2), directed=True)
        assert g.num_edges == 2

    def test_feature_row_count_must_match(self):
        with pytest.raises(ValidationError):
            Graph(num_nodes=3, edges=[], features=np.eye(2))

    def test_features_immutable(self):
        g = triangle()
        with pytest.raises(ValueError):
            g.features[0, 0] = 9.0

    def test_label_range_checked(self):
        with pytest.raises(ValidationError):
            Graph(num_nodes=1, edges=[], features=[[0.0]], label=5, num_classes=2)


class TestInducedSubgraph:
    def test_triangle_pair_keeps_one_edge(self):
        sg = induced_subgraph(triangle(), {0, 1})
        assert sg.node_ids == (0, 1)
        assert sg.induced_edges == ((0, 1),)

    def test_full_node_set_is_isomorphic(self):
        g = make_graph(seed=3)
        sg = induced_subgraph(g, range(g.num_nodes))
        assert sg.num_edges == g.num_edges
        assert sg.induced_edges == g.edges

    def test_star_leaves_have_no_edges(self):
        star = Graph(num_nodes=5, edges=[(0, k) for k in range(1, 5)], features=np.eye(5))
        sg = induced_subgraph(star, {1, 2, 3})
        assert sg.num_edges == 0

    def test_local_reindexing(self):
        g = make_graph(seed=1, n=10)
        sg = induced_subgraph(g, {2, 5, 7})
        assert sg.node_ids == (2, 5, 7)
        for i, j in sg.induced_edges:
            assert 0 <= i < 3 and 0 <= j < 3
            assert (sg.node_ids[i], sg.node_ids[j]) in g.edges

    def test_empty_set_rejected(self):
        with pytest.raises(EmptyNodeSet):
            induced_subgraph(triangle(), set())

    def test_out_of_range_rejected(self):
        with pytest.raises(InvalidNodeSet):
            induced_subgraph(triangle(), {0, 9})

    @given(seed=st.integers(0, 50), data=st.data())
    @settings(max_examples=40, deadline=None)
    def test_monotonicity_under_nesting(self, seed, data):
        # Every induced edge of a subset is an induced edge of any superset,
        # after mapping back to parent node ids.
        g = make_graph(seed=seed, n=12, extra_edges=8)
        big = data.draw(st.sets(st.integers(0, 11), min_size=2, max_size=10))
        small = data.draw(st.sets(st.sampled_from(sorted(big)), min_size=1))
        sg_small = induced_subgraph(g, small)
        sg_big = induced_subgraph(g, big)
        big_parent_edges = {
            (sg_big.node_ids[i], sg_big.node_ids[j]) for i, j in sg_big.induced_edges
        }
        for i, j in sg_small.induced_edges:
            assert (sg_small.node_ids[i], sg_small.node_ids[j]) in big_parent_edges


class TestEdgeRemoved:
    def test_triangle_loses_one_edge(self):
        g = edge_removed(triangle(), 0, 1)
        assert g.num_edges == 2
        assert (0, 1) not in g.edges

    def test_only_edge_leaves_edgeless_graph(self):
        g = Graph(num_nodes=2, edges=[(0, 1)], features=np.eye(2))
        assert edge_removed(g, 0, 1).num_edges == 0

    def test_undirected_accepts_either_orientation(self):
        g = edge_removed(triangle(), 1, 0)
        assert (0, 1) not in g.edges

    def test_directed_keeps_reverse_edge(self):
        g = Graph(num_nodes=2, edges=[(0, 1), (1, 0)], features=np.eye(2), directed=True)
        out = edge_removed(g, 0, 1)
        assert out.edges == ((1, 0),)

    def test_non_edge_rejected(self):
        star = Graph(num_nodes=4, edges=[(0, 1), (0, 2), (0, 3)], features=np.eye(4))
        with pytest.raises(NotAnEdge):
            edge_removed(star, 1, 2)

    @given(seed=st.integers(0, 100))
    @settings(max_examples=30, deadline=None)
    def test_removes_exactly_one_pair(self, seed):
        g = make_graph(seed=seed, n=9, extra_edges=4)
        gen = np.random.default_rng(seed)
        i, j = g.edges[gen.integers(g.num_edges)]
        assert edge_removed(g, i, j).num_edges == g.num_edges - 1


class TestSerialization:
    def test_minimal_graph(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(
            '{"num_nodes": 1, "directed": false, "edges": [], '
            '"features": [[0.0]], "label": null, "num_classes": 2}'
        )
        g = load_graph(path)
        assert g.num_nodes == 1 and g.num_edges == 0

    def test_out_of_bounds_edge_is_validation_error(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(
            '{"num_nodes": 3, "directed": false, "edges": [[0, 5]], '
            '"features": [[0.0], [0.0], [0.0]], "label": null, "num_classes": 2}'
        )
        with pytest.raises(ValidationError):
            load_graph(path)

    def test_missing_key_is_format_error(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text('{"num_nodes": 1}')
        with pytest.raises(FormatError, match="directed"):
            load_graph(path)

    def test_round_trip_50_nodes(self, tmp_path):
        g = make_graph(seed=11, n=50, extra_edges=40, d=3)
        path = tmp_path / "g.json"
        save_graph(g, path)
        assert load_graph(path) == g

    @given(seed=st.integers(0, 10_000))
    @settings(max_examples=50, deadline=None)
    def test_round_trip_is_identity(self, seed, tmp_path_factory):
        gen = np.random.default_rng(seed)
        g = make_graph(
            seed=seed,
            n=int(gen.integers(2, 16)),
            extra_edges=int(gen.integers(0, 8)),
            d=int(gen.integers(1, 5)),
            directed=bool(gen.integers(2)),
        )
        path = tmp_path_factory.mktemp("rt") / "g.json"
        save_graph(g, path)
        loaded = load_graph(path)
        assert loaded == g
        assert np.array_equal(loaded.features, g.features)


class TestDataset:
    def test_manifest_split_loading(self, toy_dataset):
        entries = load_dataset(toy_dataset)
        assert len(entries) == 4
        assert sorted({e.split for e in entries}) == ["test", "train"]

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(FormatError, match="manifest"):
            load_dataset(tmp_path)

    def test_bad_split_tag(self, tmp_path):
        import json

        (tmp_path / "manifest.json").write_text(
            json.dumps({"graphs": [{"file": "x.json", "split": "validation"}]})
        )
        with pytest.raises(FormatError, match="split"):
            load_dataset(tmp_path)
