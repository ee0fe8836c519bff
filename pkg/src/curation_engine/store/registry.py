"""On-disk registry of named collections.

Each collection lives in its own bundle-layout directory under the store
root. Collections load lazily and stay cached; every mutation path saves
back to disk so the process can be restarted at any point.
"""

from __future__ import annotations

import re
import shutil
from pathlib import Path

from ..errors import DuplicateId, UnknownCollection
from .bundle import META_FILE, read_collection_dir, write_collection_dir
from .collection import Collection, DistanceMetric
from .locks import ReadWriteLock

_NAME_RE = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


def check_collection_name(name: str) -> str:
    # names double as directory names, so no separators or dotfiles
    if not _NAME_RE.match(name):
        raise UnknownCollection(
            f"invalid collection name {name!r}: use letters, digits, '.', '_', '-'"
        )
    return name


class CollectionStore:
    """Loads, caches, and persists collections under one root directory."""

    def __init__(self, root: "str | Path"):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self._cache: dict[str, Collection] = {}
        self._locks: dict[str, ReadWriteLock] = {}

    def _dir(self, name: str) -> Path:
        return self.root / check_collection_name(name)

    def lock_for(self, name: str) -> ReadWriteLock:
        if name not in self._locks:
            self._locks[name] = ReadWriteLock()
        return self._locks[name]

    def list_names(self) -> list[str]:
        names = set(self._cache)
        if self.root.exists():
            for child in self.root.iterdir():
                if child.is_dir() and (child / META_FILE).exists():
                    names.add(child.name)
        return sorted(names)

    def exists(self, name: str) -> bool:
        return name in self._cache or (self._dir(name) / META_FILE).exists()

    def create(
        self,
        name: str,
        metric: "DistanceMetric | str" = DistanceMetric.COSINE,
    ) -> Collection:
        check_collection_name(name)
        if self.exists(name):
            raise DuplicateId(f"collection {name!r} already exists")
        if isinstance(metric, str):
            metric = DistanceMetric.parse(metric)
        collection = Collection(name, metric=metric)
        self._cache[name] = collection
        self.save(collection)
        return collection

    def get(self, name: str) -> Collection:
        if name not in self._cache:
            directory = self._dir(name)
            if not (directory / META_FILE).exists():
                raise UnknownCollection(f"no collection named {name!r}")
            self._cache[name] = read_collection_dir(directory, name=name)
        return self._cache[name]

    def save(self, collection: Collection) -> None:
        write_collection_dir(collection, self._dir(collection.name))

    def delete(self, name: str) -> None:
        if not self.exists(name):
            raise UnknownCollection(f"no collection named {name!r}")
        self._cache.pop(name, None)
        directory = self._dir(name)
        if directory.exists():
            shutil.rmtree(directory)

    def adopt(self, collection: Collection, overwrite: bool = False) -> Collection:
        """Register an in-memory collection (e.g. a bundle import) and persist it."""
        check_collection_name(collection.name)
        if self.exists(collection.name) and not overwrite:
            raise DuplicateId(f"collection {collection.name!r} already exists")
        self._cache[collection.name] = collection
        self.save(collection)
        return collection
