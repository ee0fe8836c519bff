"""Structured extraction from raw text, with three strategies.

BASIC shapes the output purely by exemplar objects retrieved from the
collection. SCHEMA_FUNCTION puts the collection schema's field list in the
prompt and validates the parsed object against it; violations are attached,
never fatal. RECURSIVE walks the schema instead: class-ranged attributes
get their own sub-extraction prompts and the nested object is assembled
bottom-up, two levels deep at most.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from ..errors import StrategyPrecondition, Unparseable
from ..objects import CuratedObject
from ..schema import AttributeSpec, ClassSpec, SchemaSpec, Violation, validate_instance
from ..store import Collection, CollectionStore, knn_search
from .context import exemplar_block, joined_sections, render_object
from .curate import _background_sections, _instruction_section
from .parsing import load_reply_list, load_reply_mapping, object_from_mapping
from .prompts import build_prompt
from .search import retrieve

EXEMPLAR_CAP = 20
BACKGROUND_TOP = 3
NESTING_DEPTH_CAP = 2


class ExtractStrategy(Enum):
    BASIC = "basic"
    SCHEMA_FUNCTION = "schema_function"
    RECURSIVE = "recursive"

    @classmethod
    def parse(cls, name: str) -> "ExtractStrategy":
        try:
            return cls(name.strip().lower())
        except ValueError:
            raise ValueError(f"unknown extraction strategy {name!r}")


@dataclass
class ExtractResult:
    proposed: CuratedObject
    exemplar_ids: "tuple[str, ...]" = ()
    violations: "tuple[Violation, ...]" = ()
    background_ids: "tuple[str, ...]" = ()
    prompt_text: str = ""


def _field_lines(schema: SchemaSpec, cls: ClassSpec,
                 attributes: "Sequence[AttributeSpec] | None" = None) -> str:
    lines = []
    for attr in (cls.attributes.values() if attributes is None else attributes):
        notes = [attr.range]
        if attr.required:
            notes.append("required")
        if attr.multivalued:
            notes.append("list")
        if attr.range in schema.enums:
            notes.append("one of " + ", ".join(schema.enums[attr.range].values))
        lines.append(f"- {attr.name} ({', '.join(notes)})")
    return "\n".join(lines) if lines else "(no fields)"


def _fetch_background(background_source, text, *, store, provider, fetcher):
    context = retrieve(background_source, text, BACKGROUND_TOP, provider=provider,
                       store=store, fetcher=fetcher)
    blocks = [render_object(obj) for obj in context.objects]
    return blocks, tuple(obj.id for obj in context.objects)


def _split_attrs(schema: SchemaSpec, cls: ClassSpec):
    scalars = [a for a in cls.attributes.values() if a.range not in schema.classes]
    nested = [a for a in cls.attributes.values() if a.range in schema.classes]
    return scalars, nested


def _extract_nested(schema: SchemaSpec, attr: AttributeSpec, passage: str,
                    provider, depth: int):
    cls = schema.classes[attr.range]
    scalars, nested = _split_attrs(schema, cls)
    prompt = build_prompt(
        "extract_nested",
        attribute=attr.name,
        class_name=cls.name,
        fields=_field_lines(schema, cls, scalars),
        passage=passage,
    )
    data = load_reply_list(provider.complete(prompt).text)
    items = []
    for item in data:
        if not isinstance(item, dict):
            raise Unparseable(f"unreadable {cls.name} entry: {item!r}")
        if depth < NESTING_DEPTH_CAP:
            for sub in nested:
                value = _extract_nested(schema, sub, passage, provider, depth + 1)
                if value:
                    item[sub.name] = value
        items.append(item)
    if attr.multivalued:
        return items
    return items[0] if items else None


def _recursive_mapping(schema: SchemaSpec, cls: ClassSpec, passage: str, provider,
                       sections: str) -> "tuple[dict, str]":
    scalars, nested = _split_attrs(schema, cls)
    prompt = build_prompt(
        "extract_schema",
        class_name=cls.name,
        fields=_field_lines(schema, cls, scalars),
        passage=passage,
        sections=sections,
    )
    data = load_reply_mapping(provider.complete(prompt).text)
    for attr in nested:
        value = _extract_nested(schema, attr, passage, provider, depth=1)
        if value:
            data[attr.name] = value
    return data, prompt.user_text


def agent_extract(
    collection: Collection,
    text: str,
    *,
    provider,
    strategy: ExtractStrategy = ExtractStrategy.BASIC,
    instructions: "str | None" = None,
    background_source: "str | None" = None,
    store: "CollectionStore | None" = None,
    fetcher=None,
    extra_context: Sequence[str] = (),
) -> ExtractResult:
    """Extract one structured entry from free text, shaped by the collection."""
    if not text.strip():
        raise ValueError("text must be non-empty")

    # caller-supplied context stays ahead of anything retrieved for the passage
    background_blocks: list[str] = list(extra_context)
    background_ids: tuple[str, ...] = ()
    if background_source is not None:
        fetched, background_ids = _fetch_background(
            background_source, text, store=store, provider=provider, fetcher=fetcher
        )
        background_blocks.extend(fetched)
    sections = joined_sections(
        _instruction_section(instructions),
        *_background_sections(background_blocks, None),
    )

    schema = collection.schema
    if strategy is ExtractStrategy.BASIC:
        hits = knn_search(collection, text, EXEMPLAR_CAP, embedder=provider)
        exemplars = [collection.objects[h.object_id] for h in hits]
        prompt = build_prompt(
            "extract_basic",
            sections=sections,
            exemplars=exemplar_block(exemplars),
            passage=text,
        )
        proposed = object_from_mapping(
            load_reply_mapping(provider.complete(prompt).text),
            existing_ids=collection.objects,
        )
        return ExtractResult(
            proposed=proposed,
            exemplar_ids=tuple(o.id for o in exemplars),
            background_ids=background_ids,
            prompt_text=prompt.user_text,
        )

    if schema is None:
        raise StrategyPrecondition(
            f"strategy {strategy.value} needs a schema on collection {collection.name!r}"
        )
    main = schema.main_class()
    if main is None:
        raise StrategyPrecondition(f"schema {schema.name!r} defines no extractable class")

    if strategy is ExtractStrategy.SCHEMA_FUNCTION:
        prompt = build_prompt(
            "extract_schema",
            class_name=main.name,
            fields=_field_lines(schema, main),
            passage=text,
            sections=sections,
        )
        data = load_reply_mapping(provider.complete(prompt).text)
        prompt_text = prompt.user_text
    else:
        data, prompt_text = _recursive_mapping(schema, main, text, provider, sections)

    violations = validate_instance(schema, main.name, data)
    proposed = object_from_mapping(data, existing_ids=collection.objects)
    return ExtractResult(
        proposed=proposed,
        violations=tuple(violations),
        background_ids=background_ids,
        prompt_text=prompt_text,
    )
