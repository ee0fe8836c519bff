"""Retrieval routing shared by every agent, plus the search agent itself.

A source name resolves to either a stored collection (plain knn, optional
MMR re-rank) or a dynamic wrapper, in which case the query is decomposed
into search terms, fetched, cached, and re-ranked semantically against the
local cache.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import EmptyCollection, UnknownCollection
from ..objects import CuratedObject
from ..sources import (
    cache_and_refine,
    cache_collection_name,
    decompose_query,
    pubmed_search,
    wikipedia_search,
)
from ..store import Collection, CollectionStore, MmrParams, SearchHit, knn_search, mmr_rerank

WRAPPER_SEARCHERS = {
    "pubmed": pubmed_search,
    "wikipedia": wikipedia_search,
}


@dataclass
class RetrievedContext:
    """Hits plus the objects they resolve to, aligned index for index."""

    source: str
    hits: "list[SearchHit]" = field(default_factory=list)
    objects: "list[CuratedObject]" = field(default_factory=list)

    def pairs(self) -> "list[tuple[CuratedObject, str]]":
        return [(obj, self.source) for obj in self.objects]


def _diversified(collection: Collection, query: str, k: int, *, embedder,
                 lambda_param: float) -> "list[SearchHit]":
    params = MmrParams(result_count=k, lambda_param=lambda_param)
    pool = min(params.candidate_pool, len(collection.objects))
    ranked = knn_search(collection, query, pool, embedder=embedder)
    query_vec = embedder.embed([query])[0]
    candidates = [(h.object_id, collection.index.rows[h.object_id]) for h in ranked]
    return mmr_rerank(query_vec, candidates, params, collection.metric)


def _collection_context(collection: Collection, query: str, k: int, *, embedder,
                        diversify: bool, lambda_param: float) -> RetrievedContext:
    if diversify:
        hits = _diversified(collection, query, k, embedder=embedder, lambda_param=lambda_param)
    else:
        hits = knn_search(collection, query, k, embedder=embedder)
    objects = [collection.objects[h.object_id] for h in hits]
    return RetrievedContext(source=collection.name, hits=hits, objects=objects)


def _wrapper_context(wrapper: str, query: str, k: int, *, store: CollectionStore,
                     provider, fetcher, diversify: bool, lambda_param: float) -> RetrievedContext:
    if fetcher is None:
        raise ValueError(f"wrapper source {wrapper!r} requires a fetcher")
    terms = decompose_query(query, provider)
    records = WRAPPER_SEARCHERS[wrapper](terms, max_records=k, fetcher=fetcher)
    cache_name = cache_collection_name(wrapper)
    hits = cache_and_refine(records, query, k, store=store, embedder=provider,
                            source_name=wrapper)
    if not hits:
        return RetrievedContext(source=cache_name)
    cache = store.get(cache_name)
    if diversify:
        hits = _diversified(cache, query, k, embedder=provider, lambda_param=lambda_param)
    objects = [cache.objects[h.object_id] for h in hits]
    return RetrievedContext(source=cache_name, hits=hits, objects=objects)


def retrieve(
    source: "str | Collection",
    query: str,
    k: int,
    *,
    provider,
    store: "CollectionStore | None" = None,
    fetcher=None,
    diversify: bool = False,
    lambda_param: float = 0.5,
) -> RetrievedContext:
    """Route a query to a collection or wrapper and return resolved hits.

    An empty collection yields an empty context rather than an error so
    multi-source callers can skip it.
    """
    if isinstance(source, Collection):
        try:
            return _collection_context(source, query, k, embedder=provider,
                                       diversify=diversify, lambda_param=lambda_param)
        except EmptyCollection:
            return RetrievedContext(source=source.name)
    if store is not None and store.exists(source):
        try:
            return _collection_context(store.get(source), query, k, embedder=provider,
                                       diversify=diversify, lambda_param=lambda_param)
        except EmptyCollection:
            return RetrievedContext(source=source)
    if source in WRAPPER_SEARCHERS:
        if store is None:
            raise ValueError("wrapper sources need a store for their cache")
        return _wrapper_context(source, query, k, store=store, provider=provider,
                                fetcher=fetcher, diversify=diversify,
                                lambda_param=lambda_param)
    raise UnknownCollection(f"{source!r} is neither a stored collection nor a wrapper")


def agent_search(
    source: "str | Collection",
    query: str,
    k: int = 10,
    *,
    provider,
    store: "CollectionStore | None" = None,
    fetcher=None,
    diversify: bool = False,
    lambda_param: float = 0.5,
) -> "list[SearchHit]":
    """Ranked hits for a query against a collection or dynamic wrapper."""
    if not query.strip():
        raise ValueError("query must be non-empty")
    if k < 1:
        raise ValueError("k must be >= 1")
    context = retrieve(source, query, k, provider=provider, store=store,
                       fetcher=fetcher, diversify=diversify, lambda_param=lambda_param)
    return context.hits
