"""Shared prompt-assembly pieces: numbered context blocks and seed rendering.

Agents put retrieved objects into prompts as numbered entries and expose the
same ids on their result types, so tests assert on structure instead of
scraping prompt strings. Renderings are deterministic; they feed the
fixture-replay digests.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from ..objects import CORE_FIELDS, CuratedObject, _dump_field, canonical_serialize

# keeps any one retrieved object from dominating a prompt
EXEMPLAR_CHAR_BUDGET = 1200


@dataclass(frozen=True)
class ContextEntry:
    """One numbered prompt entry backed by a stored object."""

    index: int
    object_id: str
    source: str
    rendering: str


def render_object(obj: CuratedObject, char_budget: int = EXEMPLAR_CHAR_BUDGET) -> str:
    return canonical_serialize(obj, char_budget=char_budget)


def build_entries(
    pairs: Iterable[tuple[CuratedObject, str]],
    char_budget: int = EXEMPLAR_CHAR_BUDGET,
) -> "list[ContextEntry]":
    entries = []
    for i, (obj, source) in enumerate(pairs, start=1):
        entries.append(
            ContextEntry(
                index=i,
                object_id=obj.id,
                source=source,
                rendering=render_object(obj, char_budget),
            )
        )
    return entries


def numbered_block(entries: Sequence[ContextEntry]) -> str:
    return "\n\n".join(f"[{e.index}]\n{e.rendering}" for e in entries)


def exemplar_block(objects: Sequence[CuratedObject]) -> str:
    if not objects:
        return "(no examples available)"
    return "\n\n".join(render_object(o) for o in objects)


def render_seed(seed: "Mapping | CuratedObject") -> str:
    """Flat-text form of a partial entry, core fields first, extras sorted."""
    if isinstance(seed, CuratedObject):
        return canonical_serialize(seed)
    data = {str(k): v for k, v in dict(seed).items() if v is not None}
    if not data:
        raise ValueError("seed must carry at least one non-empty field")
    parts = []
    for key in CORE_FIELDS:
        if key in data:
            parts.append(_dump_field(key, data.pop(key)))
    for key in sorted(data):
        parts.append(_dump_field(key, data[key]))
    return "".join(parts).rstrip("\n")


def joined_sections(*blocks: "str | None") -> str:
    """Optional prompt sections (instructions, background) as one slot value."""
    kept = [b.strip() for b in blocks if b and b.strip()]
    if not kept:
        return ""
    return "\n" + "\n\n".join(kept) + "\n"
