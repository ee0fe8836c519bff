"""Directory bundles: the shareable export format and the on-disk store layout.

A bundle is three files: ``objects.jsonl`` (one object per line, canonical
field order), ``vectors.f32le`` (row-major little-endian float32, same row
order), and ``index_meta.yaml``. The persistent store uses the identical
layout per collection directory, so export is just a strict save.
All file writes go through write-temp-then-rename.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import numpy as np
import yaml

from ..errors import CorruptBundle, EmptyCollection, StaleIndex, UnsupportedVersion
from ..objects import CuratedObject
from .collection import Collection, DistanceMetric, EmbeddingIndex, IndexMetadata

OBJECTS_FILE = "objects.jsonl"
VECTORS_FILE = "vectors.f32le"
META_FILE = "index_meta.yaml"
SCHEMA_FILE = "schema.yaml"
BUNDLE_VERSION = 1


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def write_collection_dir(collection: Collection, path: "str | Path") -> Path:
    """Persist a collection (indexed or not) as a bundle-layout directory."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)

    lines = [
        json.dumps(obj.to_dict(), ensure_ascii=False) for obj in collection.objects.values()
    ]
    _atomic_write(path / OBJECTS_FILE, ("\n".join(lines) + ("\n" if lines else "")).encode("utf-8"))

    indexed = collection.index is not None and not collection.stale_ids and set(
        collection.index.rows
    ) == set(collection.objects)
    meta = collection.metadata.to_mapping()
    meta["bundle_version"] = BUNDLE_VERSION
    meta["indexed"] = indexed
    if collection.stale_ids:
        meta["stale_ids"] = sorted(collection.stale_ids)
    _atomic_write(
        path / META_FILE,
        yaml.safe_dump(meta, sort_keys=False, allow_unicode=True).encode("utf-8"),
    )

    if collection.index is not None:
        rows = [
            collection.index.rows[oid]
            for oid in collection.objects
            if oid in collection.index.rows
        ]
        blob = b"".join(r.astype("<f4").tobytes() for r in rows)
        _atomic_write(path / VECTORS_FILE, blob)
    elif (path / VECTORS_FILE).exists():
        os.remove(path / VECTORS_FILE)

    if collection.schema is not None:
        from ..schema import schema_to_mapping

        _atomic_write(
            path / SCHEMA_FILE,
            yaml.safe_dump(schema_to_mapping(collection.schema), sort_keys=False).encode("utf-8"),
        )
    return path


def read_collection_dir(path: "str | Path", name: str | None = None) -> Collection:
    """Load a bundle-layout directory back into a collection."""
    path = Path(path)
    objects_path = path / OBJECTS_FILE
    meta_path = path / META_FILE
    if not objects_path.exists() or not meta_path.exists():
        raise CorruptBundle(f"{path} is not a collection bundle (missing files)")

    with open(meta_path, "r", encoding="utf-8") as fh:
        raw_meta = yaml.safe_load(fh) or {}
    version = raw_meta.get("bundle_version")
    if version != BUNDLE_VERSION:
        raise UnsupportedVersion(f"bundle version {version!r} is not supported")
    metadata = IndexMetadata.from_mapping(raw_meta)

    # precedence: caller's name, then the name recorded at index time,
    # then wherever the directory happens to sit
    collection = Collection(
        name or metadata.source_dataset or path.name, metric=metadata.metric
    )
    with open(objects_path, "r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorruptBundle(f"objects line {line_no} is not valid JSON: {exc}")
            obj = CuratedObject.from_dict(data)
            if obj.id in collection.objects:
                raise CorruptBundle(f"duplicate object id {obj.id!r} at line {line_no}")
            collection.objects[obj.id] = obj
    collection.metadata = metadata
    collection.stale_ids = set(raw_meta.get("stale_ids") or [])

    vectors_path = path / VECTORS_FILE
    if vectors_path.exists():
        dim = metadata.dimension
        if dim < 1:
            raise CorruptBundle("vectors present but metadata dimension is not positive")
        blob = vectors_path.read_bytes()
        expected = len(collection.objects) * dim * 4
        if len(blob) != expected:
            raise CorruptBundle(
                f"vectors file holds {len(blob)} bytes, expected {expected} "
                f"({len(collection.objects)} rows x {dim} dims)"
            )
        rows = np.frombuffer(blob, dtype="<f4").reshape(len(collection.objects), dim)
        index = EmbeddingIndex(dim, metadata.metric)
        for oid, row in zip(collection.objects, rows):
            index.insert(oid, row.copy())
        collection.index = index
    elif raw_meta.get("indexed"):
        raise CorruptBundle("metadata says indexed but vectors file is missing")

    schema_path = path / SCHEMA_FILE
    if schema_path.exists():
        from ..schema import schema_from_mapping

        with open(schema_path, "r", encoding="utf-8") as fh:
            collection.schema = schema_from_mapping(yaml.safe_load(fh))
    return collection


def export_bundle(collection: Collection, path: "str | Path") -> Path:
    """Write a shareable bundle; requires a fresh index."""
    if not collection.objects:
        raise EmptyCollection(f"collection {collection.name!r} has nothing to export")
    if not collection.is_fresh:
        raise StaleIndex(f"collection {collection.name!r} must be indexed before export")
    return write_collection_dir(collection, path)


def import_bundle(path: "str | Path", name: str | None = None) -> Collection:
    """Read a bundle, insisting on a complete index."""
    collection = read_collection_dir(path, name=name)
    if collection.index is None:
        raise CorruptBundle(f"{path} holds no vectors; not an exported bundle")
    if not collection.is_fresh:
        raise CorruptBundle(f"{path} vectors do not cover all objects")
    return collection
