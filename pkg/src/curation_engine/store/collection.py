"""Collections of curated objects with an exhaustive-scan embedding index.

Vectors are held as float32 rows (the bundle wire encoding) so that
export/import round-trips are bit-exact; all distance math runs in float64.
Staleness is tracked per object id, so re-indexing after an edit embeds
only what changed.
"""

from __future__ import annotations

import datetime
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING, Any, Iterable, Sequence

import numpy as np

from ..errors import (
    DimensionMismatch,
    DuplicateInBatch,
    EmptyCollection,
    StaleIndex,
    ZeroVector,
)
from ..objects import CuratedObject, canonical_serialize, content_digest

if TYPE_CHECKING:
    from ..schema import SchemaSpec

logger = logging.getLogger(__name__)

DEFAULT_BATCH_SIZE = 100


class DistanceMetric(Enum):
    COSINE = "cosine"
    EUCLIDEAN = "euclidean"
    NEGATIVE_INNER_PRODUCT = "negative_inner_product"

    @classmethod
    def parse(cls, value: "str | DistanceMetric | None") -> "DistanceMetric":
        if value is None:
            return cls.COSINE
        if isinstance(value, cls):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown distance metric {value!r}")


@dataclass
class SearchHit:
    object_id: str
    distance: float
    rank: int


@dataclass
class UpsertReport:
    inserted: int = 0
    updated: int = 0


@dataclass
class IndexMetadata:
    """Descriptive record accompanying an index (model, dataset, creation date)."""

    embedding_model_name: str = ""
    source_dataset: str = ""
    created_at: str = ""
    dimension: int = 0
    metric: DistanceMetric = DistanceMetric.COSINE
    object_count: int = 0

    def to_mapping(self) -> dict[str, Any]:
        return {
            "embedding_model_name": self.embedding_model_name,
            "source_dataset": self.source_dataset,
            "created_at": self.created_at,
            "dimension": self.dimension,
            "metric": self.metric.value,
            "object_count": self.object_count,
        }

    @classmethod
    def from_mapping(cls, data: dict[str, Any]) -> "IndexMetadata":
        return cls(
            embedding_model_name=str(data.get("embedding_model_name", "")),
            source_dataset=str(data.get("source_dataset", "")),
            created_at=str(data.get("created_at", "")),
            dimension=int(data.get("dimension", 0)),
            metric=DistanceMetric.parse(data.get("metric")),
            object_count=int(data.get("object_count", 0)),
        )


class EmbeddingIndex:
    """id -> float32 vector rows, all of one dimension, never the zero vector."""

    def __init__(self, dimension: int, metric: DistanceMetric = DistanceMetric.COSINE):
        if dimension < 1:
            raise ValueError("index dimension must be positive")
        self.dimension = dimension
        self.metric = metric
        self.rows: dict[str, np.ndarray] = {}

    def insert(self, object_id: str, vector: Sequence[float]) -> None:
        row = np.asarray(vector, dtype=np.float32)
        if row.ndim != 1 or row.shape[0] != self.dimension:
            raise DimensionMismatch(
                f"vector for {object_id!r} has length {row.shape[-1] if row.ndim else 0}, "
                f"index dimension is {self.dimension}"
            )
        if not np.any(row):
            raise ZeroVector(f"refusing all-zero vector for {object_id!r}")
        self.rows[object_id] = row

    def drop(self, object_id: str) -> None:
        self.rows.pop(object_id, None)

    def __len__(self) -> int:
        return len(self.rows)


class Collection:
    """Named, insertion-ordered set of objects plus optional index and schema."""

    def __init__(
        self,
        name: str,
        *,
        metric: DistanceMetric = DistanceMetric.COSINE,
        schema: "SchemaSpec | None" = None,
    ):
        self.name = name
        self.objects: dict[str, CuratedObject] = {}
        self.schema = schema
        self.metric = metric
        self.index: EmbeddingIndex | None = None
        self.metadata = IndexMetadata(metric=metric)
        self.stale_ids: set[str] = set()

    def __len__(self) -> int:
        return len(self.objects)

    def ids(self) -> list[str]:
        return list(self.objects)

    def get(self, object_id: str) -> CuratedObject | None:
        return self.objects.get(object_id)

    @property
    def is_fresh(self) -> bool:
        """True when every object has an up-to-date index row."""
        if self.index is None:
            return False
        if self.stale_ids:
            return False
        return set(self.index.rows) == set(self.objects)

    def digest(self) -> str:
        return content_digest(self.objects.values())

    def upsert(self, objects: Iterable[CuratedObject]) -> "UpsertReport":
        return upsert(self, objects)


def upsert(collection: Collection, objects: Iterable[CuratedObject]) -> UpsertReport:
    """Insert or update objects by id; changed ids are marked stale."""
    batch = list(objects)
    seen: set[str] = set()
    for obj in batch:
        if obj.id in seen:
            raise DuplicateInBatch(f"id {obj.id!r} appears twice in one upsert batch")
        seen.add(obj.id)
    report = UpsertReport()
    for obj in batch:
        existing = collection.objects.get(obj.id)
        if existing is None:
            collection.objects[obj.id] = obj
            collection.stale_ids.add(obj.id)
            report.inserted += 1
        elif existing != obj:
            collection.objects[obj.id] = obj
            collection.stale_ids.add(obj.id)
            report.updated += 1
    return report


def _utc_now_iso() -> str:
    return datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")


def build_index(
    collection: Collection,
    embedder,
    *,
    batch_size: int = DEFAULT_BATCH_SIZE,
    now: str | None = None,
) -> IndexMetadata:
    """Embed every object lacking a fresh row; no stale ids means no calls."""
    if not collection.objects:
        raise EmptyCollection(f"collection {collection.name!r} has no objects to index")
    have = set(collection.index.rows) if collection.index is not None else set()
    needed = [
        oid for oid in collection.objects
        if oid in collection.stale_ids or oid not in have
    ]
    if collection.index is not None:
        for orphan in have - set(collection.objects):
            collection.index.drop(orphan)

    vectors: list[list[float]] = []
    for start in range(0, len(needed), batch_size):
        chunk = needed[start : start + batch_size]
        texts = [canonical_serialize(collection.objects[oid]) for oid in chunk]
        result = embedder.embed(texts)
        if len(result) != len(texts):
            raise DimensionMismatch(
                f"embedder returned {len(result)} vectors for {len(texts)} texts"
            )
        vectors.extend(result)

    if needed:
        dims = {len(v) for v in vectors}
        if len(dims) != 1:
            raise DimensionMismatch(f"embedder returned mixed dimensions {sorted(dims)}")
        dim = dims.pop()
        if collection.index is None:
            collection.index = EmbeddingIndex(dim, collection.metric)
        elif collection.index.dimension != dim:
            raise DimensionMismatch(
                f"embedder dimension {dim} does not match index dimension "
                f"{collection.index.dimension}"
            )
        for oid, vec in zip(needed, vectors):
            collection.index.insert(oid, vec)

    collection.stale_ids.clear()
    model_name = getattr(embedder, "embedding_model_name", None) or getattr(
        embedder, "model_name", str(type(embedder).__name__)
    )
    collection.metadata = IndexMetadata(
        embedding_model_name=model_name,
        source_dataset=collection.name,
        created_at=now or _utc_now_iso(),
        dimension=collection.index.dimension if collection.index else 0,
        metric=collection.metric,
        object_count=len(collection.objects),
    )
    return collection.metadata


def similarity(u: Sequence[float], v: Sequence[float], metric: DistanceMetric = DistanceMetric.COSINE) -> float:
    """Characteristic value per metric: cosine, euclidean norm, or -(u.v)."""
    a = np.asarray(u, dtype=np.float64)
    b = np.asarray(v, dtype=np.float64)
    if a.shape != b.shape:
        raise DimensionMismatch(f"vector lengths differ: {a.shape[0]} vs {b.shape[0]}")
    if metric is DistanceMetric.COSINE:
        na = float(np.linalg.norm(a))
        nb = float(np.linalg.norm(b))
        if na == 0.0 or nb == 0.0:
            raise ZeroVector("cosine similarity is undefined for the zero vector")
        return float(np.dot(a, b) / (na * nb))
    if metric is DistanceMetric.EUCLIDEAN:
        return float(np.linalg.norm(a - b))
    return float(-np.dot(a, b))


def ranking_distance(u: Sequence[float], v: Sequence[float], metric: DistanceMetric) -> float:
    """Ascending-sort distance: 1 - cosine for COSINE, else the metric value."""
    value = similarity(u, v, metric)
    if metric is DistanceMetric.COSINE:
        return 1.0 - value
    return value


def knn_search(
    collection: Collection,
    query: "str | Sequence[float]",
    k: int,
    *,
    embedder=None,
    auto_refresh: bool = False,
) -> list[SearchHit]:
    """The k nearest objects under the collection metric, insertion-order ties."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not collection.objects:
        raise EmptyCollection(f"collection {collection.name!r} is empty")
    if not collection.is_fresh:
        if auto_refresh and embedder is not None:
            build_index(collection, embedder)
        else:
            raise StaleIndex(
                f"collection {collection.name!r} has unindexed or stale objects"
            )

    if isinstance(query, str):
        if embedder is None:
            raise ValueError("a text query requires an embedder")
        query_vec = np.asarray(embedder.embed([query])[0], dtype=np.float64)
    else:
        query_vec = np.asarray(query, dtype=np.float64)
    if query_vec.shape[0] != collection.index.dimension:
        raise DimensionMismatch(
            f"query dimension {query_vec.shape[0]} != index dimension "
            f"{collection.index.dimension}"
        )

    ids = list(collection.objects)
    distances = np.array(
        [ranking_distance(query_vec, collection.index.rows[oid], collection.metric) for oid in ids]
    )
    order = np.argsort(distances, kind="stable")[: min(k, len(ids))]
    return [
        SearchHit(object_id=ids[i], distance=float(distances[i]), rank=rank)
        for rank, i in enumerate(order, start=1)
    ]
