"""Tree-structured knowledge objects and their canonical text form.

The canonical form is a YAML-compatible key/value rendering with a fixed
field order (id, label, definition, aliases, relationships, original_id,
then extras sorted by name). Identical objects always serialize to
identical bytes, which is what makes embeddings reproducible.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Any, Iterable

import yaml

CORE_FIELDS = ("id", "label", "definition", "aliases", "relationships", "original_id")

DEFAULT_CHAR_BUDGET = 4000
TRUNCATION_MARKER = "...[truncated]"


@dataclass(frozen=True)
class Relationship:
    """A typed edge from the owning object to another object id."""

    predicate: str
    target: str

    def __post_init__(self):
        if not self.predicate or not str(self.predicate).strip():
            raise ValueError("relationship predicate must be non-empty")
        if not self.target or not str(self.target).strip():
            raise ValueError("relationship target must be non-empty")


@dataclass
class CuratedObject:
    """A single curated record: ontology term, KB entry, cached source record."""

    id: str
    label: str = ""
    definition: str | None = None
    aliases: list[str] | None = None
    relationships: list[Relationship] = field(default_factory=list)
    original_id: str | None = None
    extras: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not self.id or not str(self.id).strip():
            raise ValueError("object id must be non-empty")
        for key in self.extras:
            if key in CORE_FIELDS:
                raise ValueError(f"extras may not shadow core field {key!r}")
        # top-level nulls are never serialized, so they may not be stored
        self.extras = {k: v for k, v in self.extras.items() if v is not None}

    def to_dict(self) -> dict[str, Any]:
        """Plain-value mapping in canonical field order (extras sorted)."""
        out: dict[str, Any] = {"id": self.id}
        if self.label:
            out["label"] = self.label
        if self.definition is not None:
            out["definition"] = self.definition
        if self.aliases is not None:
            out["aliases"] = list(self.aliases)
        if self.relationships:
            out["relationships"] = [
                {"predicate": r.predicate, "target": r.target} for r in self.relationships
            ]
        if self.original_id is not None:
            out["original_id"] = self.original_id
        for key in sorted(self.extras):
            out[key] = self.extras[key]
        return out

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CuratedObject":
        rels = [
            Relationship(str(r["predicate"]), str(r["target"]))
            for r in data.get("relationships") or []
        ]
        aliases = data.get("aliases")
        if aliases is not None:
            aliases = [str(a) for a in aliases]
        extras = {k: v for k, v in data.items() if k not in CORE_FIELDS}
        return cls(
            id=str(data["id"]),
            label=str(data.get("label") or ""),
            definition=data.get("definition"),
            aliases=aliases,
            relationships=rels,
            original_id=data.get("original_id"),
            extras=extras,
        )


def _dump_field(key: str, value: Any) -> str:
    text = yaml.safe_dump(
        {key: value},
        default_flow_style=False,
        allow_unicode=True,
        sort_keys=True,
        width=2**16,
    )
    # YAML 1.1 folds the exotic line breaks (NEL, LS, PS) on load; fields
    # carrying them switch to double-quoted style, which escapes losslessly
    if yaml.safe_load(text) != {key: value}:
        text = yaml.safe_dump(
            {key: value},
            default_flow_style=False,
            allow_unicode=True,
            sort_keys=True,
            width=2**16,
            default_style='"',
        )
    return text


def canonical_serialize(obj: CuratedObject, char_budget: int = DEFAULT_CHAR_BUDGET) -> str:
    """Deterministic flat-text rendering of an object.

    Equal objects (regardless of extras insertion order) yield identical
    bytes. Output longer than ``char_budget`` is cut and marked; truncated
    text is meant for embedding input only and is not re-parseable.
    """
    parts = []
    for key, value in obj.to_dict().items():
        parts.append(_dump_field(key, value))
    text = "".join(parts).rstrip("\n")
    if len(text) > char_budget:
        text = text[:char_budget] + TRUNCATION_MARKER
    return text


def object_digest(obj: CuratedObject) -> str:
    return hashlib.sha256(canonical_serialize(obj, char_budget=2**31).encode("utf-8")).hexdigest()


def content_digest(objects: Iterable[CuratedObject]) -> str:
    """Order-sensitive digest over a sequence of objects (non-mutation checks)."""
    h = hashlib.sha256()
    for obj in objects:
        h.update(object_digest(obj).encode("ascii"))
    return h.hexdigest()
