import json
import logging

import pytest

from curation_engine.errors import MissingField, ParseError
from curation_engine.objects import Relationship
from curation_engine.providers import MockProvider
from curation_engine.sources import (
    SourceRecord,
    cache_and_refine,
    cache_collection_name,
    load_flat,
    load_ontology,
)
from curation_engine.store import Collection, CollectionStore

from oracles import brute_knn


def obo_node(curie, label, definition=None, synonyms=(), deprecated=False):
    meta = {}
    if definition:
        meta["definition"] = {"val": definition}
    if synonyms:
        meta["synonyms"] = [{"pred": "hasExactSynonym", "val": s} for s in synonyms]
    if deprecated:
        meta["deprecated"] = True
    node = {"id": f"http://purl.obolibrary.org/obo/{curie.replace(':', '_')}",
            "lbl": label, "type": "CLASS"}
    if meta:
        node["meta"] = meta
    return node


MINI_GRAPH = {
    "graphs": [{
        "nodes": [
            obo_node("FOODON:00001278", "cake food product",
                     "A food that is usually sweet and often baked.",
                     synonyms=["cake"]),
            obo_node("FOODON:00001626", "bakery food product"),
            obo_node("FOODON:99999999", "obsolete sponge product", deprecated=True),
            {"id": "http://purl.obolibrary.org/obo/FOODON_11111111", "type": "CLASS"},
        ],
        "edges": [
            {"sub": "http://purl.obolibrary.org/obo/FOODON_00001278",
             "pred": "is_a",
             "obj": "http://purl.obolibrary.org/obo/FOODON_00001626"},
        ],
    }],
}


class TestLoadOntology:
    def test_nodes_become_objects(self, tmp_path):
        path = tmp_path / "mini.json"
        path.write_text(json.dumps(MINI_GRAPH))
        objects = load_ontology(path)

        assert [o.id for o in objects] == ["CakeFoodProduct", "BakeryFoodProduct"]
        cake = objects[0]
        assert cake.original_id == "FOODON:00001278"
        assert cake.definition == "A food that is usually sweet and often baked."
        assert cake.aliases == ["cake"]
        assert cake.relationships == [Relationship("subclassOf", "BakeryFoodProduct")]

    def test_obsolete_and_unlabeled_skipped(self, tmp_path, caplog):
        path = tmp_path / "mini.json"
        path.write_text(json.dumps(MINI_GRAPH))
        with caplog.at_level(logging.WARNING):
            objects = load_ontology(path)
        ids = {o.original_id for o in objects}
        assert "FOODON:99999999" not in ids
        assert "FOODON:11111111" not in ids
        assert "skipped 1 unlabeled" in caplog.text

    def test_edge_to_external_target_keeps_curie(self, tmp_path):
        graph = {"graphs": [{
            "nodes": [obo_node("X:1", "alpha thing")],
            "edges": [{"sub": "X:1", "pred": "is_a", "obj": "Y:2"}],
        }]}
        path = tmp_path / "g.json"
        path.write_text(json.dumps(graph))
        (obj,) = load_ontology(path)
        assert obj.relationships == [Relationship("subclassOf", "Y:2")]

    def test_non_isa_predicate_compacted(self, tmp_path):
        graph = {"graphs": [{
            "nodes": [obo_node("X:1", "alpha"), obo_node("X:2", "beta")],
            "edges": [{"sub": "X:1",
                       "pred": "http://purl.obolibrary.org/obo/RO_0001025",
                       "obj": "X:2"}],
        }]}
        path = tmp_path / "g.json"
        path.write_text(json.dumps(graph))
        alpha = load_ontology(path)[0]
        assert alpha.relationships == [Relationship("RO:0001025", "Beta")]

    def test_empty_graphs(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"graphs": []}))
        assert load_ontology(path) == []

    def test_deterministic_and_idempotent_on_upsert(self, tmp_path):
        path = tmp_path / "mini.json"
        path.write_text(json.dumps(MINI_GRAPH))
        first, second = load_ontology(path), load_ontology(path)
        assert first == second
        coll = Collection("c")
        coll.upsert(first)
        report = coll.upsert(second)
        assert (report.inserted, report.updated) == (0, 0)

    def test_duplicate_labels_get_distinct_ids(self, tmp_path):
        graph = {"graphs": [{
            "nodes": [obo_node("X:1", "same label"), obo_node("X:2", "same label")],
            "edges": [],
        }]}
        path = tmp_path / "g.json"
        path.write_text(json.dumps(graph))
        ids = [o.id for o in load_ontology(path)]
        assert ids == ["SameLabel", "SameLabel_2"]

    def test_not_a_graph_file(self, tmp_path):
        path = tmp_path / "g.json"
        path.write_text(json.dumps({"nodes": []}))
        with pytest.raises(ParseError):
            load_ontology(path)
        path.write_text("{broken")
        with pytest.raises(ParseError):
            load_ontology(path)


CSV_TEXT = """id,label,definition,category
F1,red raspberry,A red edible berry.,fruit
F2,red currant,A small red berry.,fruit
"""

YAML_TEXT = """
- id: F1
  label: red raspberry
  definition: A red edible berry.
  category: fruit
- id: F2
  label: red currant
  definition: A small red berry.
  category: fruit
"""


class TestLoadFlat:
    def test_csv_rows(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text(CSV_TEXT)
        objects = load_flat(path, "csv")
        assert [o.id for o in objects] == ["F1", "F2"]
        assert objects[0].label == "red raspberry"
        assert objects[0].definition == "A red edible berry."
        assert objects[0].extras == {"category": "fruit"}

    def test_csv_equals_yaml(self, tmp_path):
        csv_path = tmp_path / "rows.csv"
        csv_path.write_text(CSV_TEXT)
        yaml_path = tmp_path / "rows.yaml"
        yaml_path.write_text(YAML_TEXT)
        assert load_flat(csv_path, "csv") == load_flat(yaml_path, "yaml")

    def test_json_and_tsv(self, tmp_path):
        json_path = tmp_path / "rows.json"
        json_path.write_text(json.dumps([{"id": "A", "label": "alpha", "n": 3}]))
        (obj,) = load_flat(json_path, "json")
        assert obj.extras == {"n": 3}

        tsv_path = tmp_path / "rows.tsv"
        tsv_path.write_text("id\tlabel\nB\tbeta\n")
        assert load_flat(tsv_path, "tsv")[0].id == "B"

    def test_format_inferred_from_suffix(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text(CSV_TEXT)
        assert len(load_flat(path)) == 2

    def test_id_minted_from_label(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text("id,label\n,fingernail specimen\n")
        assert load_flat(path, "csv")[0].id == "FingernailSpecimen"

    def test_missing_both_fields_names_row(self, tmp_path):
        path = tmp_path / "rows.csv"
        path.write_text("id,label,definition\nA,alpha,ok\n,,orphan\n")
        with pytest.raises(MissingField, match="row 2"):
            load_flat(path, "csv")

    def test_custom_field_names(self, tmp_path):
        path = tmp_path / "rows.json"
        path.write_text(json.dumps([{"curie": "X:1", "name": "thing"}]))
        (obj,) = load_flat(path, "json", id_field="curie", label_field="name")
        assert obj.id == "X:1" and obj.label == "thing"

    def test_yaml_aliases_list_goes_to_core(self, tmp_path):
        path = tmp_path / "rows.yaml"
        path.write_text("- id: A\n  label: a\n  aliases: [one, two]\n")
        assert load_flat(path, "yaml")[0].aliases == ["one", "two"]

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            load_flat(tmp_path / "rows.csv", "parquet")

    def test_non_list_json(self, tmp_path):
        path = tmp_path / "rows.json"
        path.write_text(json.dumps({"id": "A"}))
        with pytest.raises(ParseError):
            load_flat(path, "json")


def make_records(n):
    return [
        SourceRecord(record_id=f"PMID:{1000 + i}", title=f"Paper {i} about topic {i % 3}",
                     body=f"Abstract text number {i} discussing topic {i % 3}.",
                     source_name="pubmed")
        for i in range(n)
    ]


class TestCacheAndRefine:
    def test_cache_collection_created_and_named(self, tmp_path):
        store = CollectionStore(tmp_path)
        provider = MockProvider(strict=False)
        cache_and_refine(make_records(3), "topic 1", 2, store=store, embedder=provider)
        assert cache_collection_name("pubmed") == "cache-pubmed"
        assert store.list_names() == ["cache-pubmed"]
        assert len(store.get("cache-pubmed")) == 3

    def test_idempotent_caching(self, tmp_path):
        store = CollectionStore(tmp_path)
        provider = MockProvider(strict=False)
        records = make_records(5)
        cache_and_refine(records, "q", 3, store=store, embedder=provider)
        embedded_once = provider.embedded_text_count()
        cache_and_refine(records, "q", 3, store=store, embedder=provider)
        assert len(store.get("cache-pubmed")) == 5
        # second pass embeds only the fresh query, not the cached records
        assert provider.embedded_text_count() == embedded_once + 1

    def test_self_match_ranks_first(self, tmp_path):
        store = CollectionStore(tmp_path)
        provider = MockProvider(strict=False)
        records = make_records(5)
        target = records[2]
        hits = cache_and_refine(records, target.body, 1, store=store, embedder=provider)
        assert hits[0].object_id == target.record_id

    def test_matches_knn_oracle(self, tmp_path):
        store = CollectionStore(tmp_path)
        provider = MockProvider(strict=False)
        hits = cache_and_refine(make_records(20), "topic 2 discussion", 5,
                                store=store, embedder=provider)
        cache = store.get("cache-pubmed")
        query = provider.embed(["topic 2 discussion"])[0]
        rows = [(oid, cache.index.rows[oid]) for oid in cache.objects]
        expected = brute_knn(rows, query, 5, "cosine")
        assert [h.object_id for h in hits] == [oid for oid, _ in expected]

    def test_no_records_no_cache(self, tmp_path):
        store = CollectionStore(tmp_path)
        assert cache_and_refine([], "q", 3, store=store,
                                embedder=MockProvider(strict=False)) == []
        assert store.list_names() == []

    def test_search_existing_cache_without_new_records(self, tmp_path):
        store = CollectionStore(tmp_path)
        provider = MockProvider(strict=False)
        cache_and_refine(make_records(4), "q", 2, store=store, embedder=provider)
        hits = cache_and_refine([], "topic 0", 2, store=store, embedder=provider,
                                source_name="pubmed")
        assert len(hits) == 2
