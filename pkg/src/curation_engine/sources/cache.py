"""Local vector cache for fetched records.

Records land in a per-source cache collection, get embedded once, and are
then searchable like any other collection; re-fetching the same records
is a no-op.
"""

from __future__ import annotations

from ..objects import CuratedObject
from ..store import Collection, CollectionStore, SearchHit, build_index, knn_search
from .records import SourceRecord


def cache_collection_name(source_name: str) -> str:
    return f"cache-{source_name}"


def record_to_object(record: SourceRecord) -> CuratedObject:
    extras = {k: v for k, v in record.extra_ids.items()}
    if record.source_name:
        extras["source_name"] = record.source_name
    return CuratedObject(
        id=record.record_id,
        label=record.title,
        definition=record.body or None,
        extras=extras,
    )


def cache_and_refine(
    records: "list[SourceRecord]",
    query: str,
    k: int,
    *,
    store: CollectionStore,
    embedder,
    source_name: "str | None" = None,
) -> "list[SearchHit]":
    """Cache records, embed what's new, then search the whole cache."""
    if source_name is None:
        if not records:
            return []
        source_name = records[0].source_name or "unknown"
    name = cache_collection_name(source_name)
    if store.exists(name):
        cache = store.get(name)
    else:
        cache = store.create(name)
    if records:
        cache.upsert([record_to_object(r) for r in records])
    if not cache.objects:
        return []
    if not cache.is_fresh:
        build_index(cache, embedder)
    store.save(cache)
    return knn_search(cache, query, k, embedder=embedder)
