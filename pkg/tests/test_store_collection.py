import numpy as np
import pytest

from curation_engine.errors import (
    DimensionMismatch,
    DuplicateInBatch,
    EmptyCollection,
    StaleIndex,
    ZeroVector,
)
from curation_engine.objects import CuratedObject
from curation_engine.providers import MockProvider, mock_embed_rule
from curation_engine.store import (
    Collection,
    DistanceMetric,
    build_index,
    knn_search,
    ranking_distance,
    similarity,
)

from conftest import make_objects
from oracles import brute_knn, cosine_exact, euclidean_exact, neg_dot_exact


class TestUpsert:
    def test_insert_then_update_counts(self):
        coll = Collection("c")
        report = coll.upsert(make_objects(3))
        assert (report.inserted, report.updated) == (3, 0)

        changed = make_objects(3)
        changed[1] = CuratedObject(id="Obj1", label="renamed")
        report = coll.upsert(changed)
        assert (report.inserted, report.updated) == (0, 1)

    def test_identical_upsert_is_noop(self):
        coll = Collection("c")
        coll.upsert(make_objects(2))
        coll.stale_ids.clear()
        report = coll.upsert(make_objects(2))
        assert (report.inserted, report.updated) == (0, 0)
        assert not coll.stale_ids

    def test_duplicate_id_in_batch_rejected(self):
        coll = Collection("c")
        batch = [CuratedObject(id="A", label="one"), CuratedObject(id="A", label="two")]
        with pytest.raises(DuplicateInBatch):
            coll.upsert(batch)
        # the failed batch must not leave partial state behind
        assert len(coll) == 0

    def test_update_marks_stale(self, provider):
        coll = Collection("c")
        coll.upsert(make_objects(2))
        build_index(coll, provider)
        assert coll.is_fresh
        coll.upsert([CuratedObject(id="Obj0", label="different")])
        assert "Obj0" in coll.stale_ids
        assert not coll.is_fresh


class TestBuildIndex:
    def test_embeds_only_new_and_stale(self):
        provider = MockProvider(strict=False)
        coll = Collection("c")
        coll.upsert(make_objects(5))
        build_index(coll, provider)
        assert provider.embedded_text_count() == 5

        coll.upsert([CuratedObject(id="Obj1", label="changed")])
        coll.upsert([CuratedObject(id="Obj9", label="brand new")])
        build_index(coll, provider)
        assert provider.embedded_text_count() == 7  # 5 + changed + new

    def test_fresh_rebuild_makes_no_embed_calls(self):
        provider = MockProvider(strict=False)
        coll = Collection("c")
        coll.upsert(make_objects(4))
        build_index(coll, provider)
        build_index(coll, provider)
        assert provider.embedded_text_count() == 4

    def test_batching_respects_batch_size(self):
        provider = MockProvider(strict=False)
        coll = Collection("c")
        coll.upsert(make_objects(7))
        build_index(coll, provider, batch_size=3)
        batches = [n for kind, n in provider.call_log if kind == "embed"]
        assert batches == [3, 3, 1]

    def test_deleted_objects_are_pruned(self, provider):
        coll = Collection("c")
        coll.upsert(make_objects(3))
        build_index(coll, provider)
        del coll.objects["Obj1"]
        build_index(coll, provider)
        assert set(coll.index.rows) == {"Obj0", "Obj2"}
        assert coll.is_fresh

    def test_metadata_recorded(self, provider):
        coll = Collection("c")
        coll.upsert(make_objects(2))
        meta = build_index(coll, provider, now="2026-08-14T00:00:00+00:00")
        assert meta.embedding_model_name == "mock-fnv1a-256"
        assert meta.source_dataset == "c"
        assert meta.dimension == 256
        assert meta.object_count == 2
        assert meta.metric is DistanceMetric.COSINE
        assert meta.created_at == "2026-08-14T00:00:00+00:00"

    def test_empty_collection_rejected(self, provider):
        with pytest.raises(EmptyCollection):
            build_index(Collection("c"), provider)

    def test_rows_are_float32(self, indexed_collection):
        row = next(iter(indexed_collection.index.rows.values()))
        assert row.dtype == np.float32


class TestSimilarity:
    @pytest.mark.parametrize("metric,oracle", [
        (DistanceMetric.COSINE, cosine_exact),
        (DistanceMetric.EUCLIDEAN, euclidean_exact),
        (DistanceMetric.NEGATIVE_INNER_PRODUCT, neg_dot_exact),
    ])
    def test_against_exact_arithmetic(self, rng, metric, oracle):
        for _ in range(25):
            u = rng.normal(size=16)
            v = rng.normal(size=16)
            got = ranking_distance(u, v, metric)
            assert got == pytest.approx(oracle(u, v), abs=1e-12)

    def test_cosine_value_vs_distance(self):
        u, v = [1.0, 0.0], [1.0, 1.0]
        assert similarity(u, v, DistanceMetric.COSINE) == pytest.approx(2 ** -0.5)
        assert ranking_distance(u, v, DistanceMetric.COSINE) == pytest.approx(1 - 2 ** -0.5)

    def test_zero_vector_cosine(self):
        with pytest.raises(ZeroVector):
            similarity([0.0, 0.0], [1.0, 0.0], DistanceMetric.COSINE)

    def test_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            similarity([1.0], [1.0, 2.0], DistanceMetric.EUCLIDEAN)

    def test_metric_parse(self):
        assert DistanceMetric.parse("cosine") is DistanceMetric.COSINE
        assert DistanceMetric.parse("EUCLIDEAN") is DistanceMetric.EUCLIDEAN
        with pytest.raises(ValueError):
            DistanceMetric.parse("manhattan")


class TestKnnSearch:
    @pytest.mark.parametrize("metric_name", ["cosine", "euclidean", "negative_inner_product"])
    def test_matches_brute_force(self, rng, metric_name):
        metric = DistanceMetric.parse(metric_name)
        coll = Collection("c", metric=metric)
        coll.upsert(make_objects(20))
        provider = MockProvider(strict=False, dimension=32)
        build_index(coll, provider)

        query = rng.normal(size=32)
        hits = knn_search(coll, query, k=7)
        rows = [(oid, coll.index.rows[oid]) for oid in coll.objects]
        expected = brute_knn(rows, query, 7, metric_name.split("_")[0] if metric_name != "negative_inner_product" else "dot")
        assert [h.object_id for h in hits] == [oid for oid, _ in expected]
        for hit, (_, dist) in zip(hits, expected):
            assert hit.distance == pytest.approx(dist, abs=1e-9)
        assert [h.rank for h in hits] == list(range(1, 8))

    def test_text_query_goes_through_embedder(self, indexed_collection, provider):
        hits = knn_search(indexed_collection, "liver item", k=3, embedder=provider)
        assert len(hits) == 3
        # nearest object should be one of the liver-labelled ones
        top = indexed_collection.get(hits[0].object_id)
        assert "liver" in top.label

    def test_tied_distances_keep_insertion_order(self, provider):
        coll = Collection("c")
        coll.upsert([CuratedObject(id=f"T{i}", label=f"t{i}") for i in range(5)])
        build_index(coll, provider)
        # plant identical rows so every distance ties exactly
        same = np.full(256, 0.0625, dtype=np.float32)
        for oid in coll.objects:
            coll.index.rows[oid] = same
        hits = knn_search(coll, np.ones(256), k=5)
        assert [h.object_id for h in hits] == [f"T{i}" for i in range(5)]
        assert len({h.distance for h in hits}) == 1

    def test_k_larger_than_collection(self, indexed_collection):
        hits = knn_search(indexed_collection, np.ones(256), k=100)
        assert len(hits) == len(indexed_collection)

    def test_empty_collection(self, provider):
        with pytest.raises(EmptyCollection):
            knn_search(Collection("c"), np.ones(4), k=1)

    def test_stale_index_without_refresh(self, indexed_collection):
        indexed_collection.upsert([CuratedObject(id="New", label="new")])
        with pytest.raises(StaleIndex):
            knn_search(indexed_collection, np.ones(256), k=1)

    def test_stale_index_with_auto_refresh(self, indexed_collection, provider):
        indexed_collection.upsert([CuratedObject(id="New", label="new")])
        hits = knn_search(
            indexed_collection, "new", k=1, embedder=provider, auto_refresh=True
        )
        assert hits and indexed_collection.is_fresh

    def test_query_dimension_checked(self, indexed_collection):
        with pytest.raises(DimensionMismatch):
            knn_search(indexed_collection, np.ones(8), k=1)


def test_mock_embed_rule_is_unit_norm_and_deterministic():
    v1 = mock_embed_rule("premature hair graying", 256)
    v2 = mock_embed_rule("premature hair graying", 256)
    assert np.array_equal(v1, v2)
    assert np.linalg.norm(v1) == pytest.approx(1.0, abs=1e-12)
