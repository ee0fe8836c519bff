"""Ingest of ontology-graph JSON interchange files.

Term nodes become curated objects with label-derived ids; the source
CURIE is kept as ``original_id`` so nothing is lost. Obsolete nodes are
dropped, unlabeled nodes are skipped and counted in a warning.
"""

from __future__ import annotations

import json
import logging
from pathlib import Path

from ..errors import ParseError
from ..objects import CuratedObject, Relationship

logger = logging.getLogger(__name__)

SUBCLASS_PREDICATE = "subclassOf"


def _curie(identifier: str) -> str:
    # IRIs like .../FOODON_00001278 compact to FOODON:00001278
    tail = identifier.rsplit("/", 1)[-1].rsplit("#", 1)[-1]
    if ":" not in tail and "_" in tail:
        prefix, _, local = tail.rpartition("_")
        if prefix and local:
            return f"{prefix}:{local}"
    return tail


def _is_obsolete(node: dict) -> bool:
    meta = node.get("meta") or {}
    if meta.get("deprecated"):
        return True
    label = node.get("lbl") or ""
    return label.lower().startswith("obsolete ")


def _synonyms(node: dict) -> "list[str] | None":
    meta = node.get("meta") or {}
    values = []
    for syn in meta.get("synonyms") or []:
        val = (syn or {}).get("val")
        if val and val not in values:
            values.append(val)
    return values or None


def load_ontology(path: "str | Path") -> "list[CuratedObject]":
    # function-level import: agents depends on sources, a module-level one cycles
    from ..agents.parsing import mint_id

    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            document = json.load(fh)
    except (OSError, ValueError) as exc:
        raise ParseError(f"cannot read ontology graph file {path}: {exc}")
    graphs = document.get("graphs")
    if graphs is None:
        raise ParseError(f"{path} has no 'graphs' list")

    objects: list[CuratedObject] = []
    by_curie: dict[str, CuratedObject] = {}
    minted: set[str] = set()
    label_by_curie: dict[str, str] = {}
    skipped_unlabeled = 0

    for graph in graphs:
        for node in graph.get("nodes") or []:
            if node.get("type") not in (None, "CLASS"):
                continue
            if _is_obsolete(node):
                continue
            label = node.get("lbl")
            if not label:
                skipped_unlabeled += 1
                continue
            curie = _curie(str(node["id"]))
            meta = node.get("meta") or {}
            definition = (meta.get("definition") or {}).get("val")
            obj_id = mint_id(label, minted)
            minted.add(obj_id)
            obj = CuratedObject(
                id=obj_id,
                label=label,
                definition=definition,
                aliases=_synonyms(node),
                original_id=curie,
            )
            objects.append(obj)
            by_curie[curie] = obj
            label_by_curie[curie] = label

        for edge in graph.get("edges") or []:
            sub = _curie(str(edge.get("sub", "")))
            obj_ref = _curie(str(edge.get("obj", "")))
            if sub not in by_curie:
                continue
            pred = str(edge.get("pred", ""))
            predicate = SUBCLASS_PREDICATE if pred == "is_a" else _curie(pred)
            # point at the minted id when the target node is in this file
            target = by_curie[obj_ref].id if obj_ref in by_curie else obj_ref
            if predicate and target:
                by_curie[sub].relationships.append(Relationship(predicate, target))

    if skipped_unlabeled:
        logger.warning("skipped %d unlabeled ontology node(s) in %s", skipped_unlabeled, path)
    return objects
