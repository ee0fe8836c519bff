"""Vector-indexed object store: collections, search, ranking, persistence."""

from .bundle import (
    BUNDLE_VERSION,
    META_FILE,
    OBJECTS_FILE,
    SCHEMA_FILE,
    VECTORS_FILE,
    export_bundle,
    import_bundle,
    read_collection_dir,
    write_collection_dir,
)
from .collection import (
    Collection,
    DistanceMetric,
    EmbeddingIndex,
    IndexMetadata,
    SearchHit,
    UpsertReport,
    build_index,
    knn_search,
    ranking_distance,
    similarity,
)
from .locks import ReadWriteLock
from .mmr import MmrParams, mmr_rerank
from .projection import project_2d
from .registry import CollectionStore, check_collection_name

__all__ = [
    "BUNDLE_VERSION",
    "META_FILE",
    "OBJECTS_FILE",
    "SCHEMA_FILE",
    "VECTORS_FILE",
    "Collection",
    "CollectionStore",
    "DistanceMetric",
    "EmbeddingIndex",
    "IndexMetadata",
    "MmrParams",
    "ReadWriteLock",
    "SearchHit",
    "UpsertReport",
    "build_index",
    "check_collection_name",
    "export_bundle",
    "import_bundle",
    "knn_search",
    "mmr_rerank",
    "project_2d",
    "ranking_distance",
    "read_collection_dir",
    "similarity",
    "write_collection_dir",
]
