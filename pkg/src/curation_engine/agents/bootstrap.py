"""Bootstrapping a knowledge base: schema first, then sample data.

The model drafts the schema; post-processing makes it safe to use. A tree
root container holding the main class is guaranteed, every attribute the
user asked for ends up somewhere (injected as plain text and flagged when
the model dropped it), and the result must pass schema validation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import yaml

from ..errors import EmptyAfterNormalization, InvalidSchema, Unparseable
from ..objects import CuratedObject
from ..schema import (
    AttributeSpec,
    ClassSpec,
    SchemaSpec,
    Violation,
    render_schema,
    repair_schema,
    schema_from_mapping,
    validate_instance,
    validate_schema,
)
from .parsing import _FENCE, load_reply_mapping, mint_id
from .prompts import build_prompt


@dataclass(frozen=True)
class BootstrapConfig:
    kb_name: str
    description: str
    attributes: "tuple[str, ...]"
    main_class: str

    def __post_init__(self):
        for name in ("kb_name", "description", "main_class"):
            if not str(getattr(self, name)).strip():
                raise ValueError(f"{name} must be non-empty")
        object.__setattr__(self, "attributes", tuple(self.attributes))
        if not self.attributes or not all(str(a).strip() for a in self.attributes):
            raise ValueError("attributes must be a non-empty list of names")


@dataclass
class DataInstance:
    """One generated sample: raw field values, object form, and any violations."""

    values: dict
    obj: CuratedObject
    violations: "tuple[Violation, ...]"


def _ensure_container(schema: SchemaSpec, main_class: str) -> None:
    if main_class not in schema.classes:
        schema.classes[main_class] = ClassSpec(name=main_class)
    root = schema.tree_root_class
    if root is None:
        container = ClassSpec(
            name="Container",
            tree_root=True,
            attributes={
                "members": AttributeSpec(name="members", range=main_class, multivalued=True)
            },
        )
        rebuilt = {"Container": container}
        rebuilt.update(schema.classes)
        schema.classes = rebuilt
        return
    for attr in root.attributes.values():
        if attr.range == main_class and attr.multivalued:
            return
    root.attributes["members"] = AttributeSpec(
        name="members", range=main_class, multivalued=True, repaired=True
    )


def agent_bootstrap_schema(config: BootstrapConfig, *, provider) -> SchemaSpec:
    """Draft a schema for a new knowledge base and make it structurally sound."""
    prompt = build_prompt(
        "bootstrap_schema",
        kb_name=config.kb_name,
        description=config.description,
        attributes=", ".join(config.attributes),
        main_class=config.main_class,
    )
    schema = schema_from_mapping(load_reply_mapping(provider.complete(prompt).text))

    _ensure_container(schema, config.main_class)
    present = {
        attr.name for cls in schema.classes.values() for attr in cls.attributes.values()
    }
    missing = [a for a in config.attributes if a not in present]
    repair_schema(schema, config.main_class, missing)

    problems = validate_schema(schema)
    if problems:
        raise InvalidSchema("generated schema is unusable: " + "; ".join(problems))
    return schema


def _instance_documents(text: str) -> Iterator[dict]:
    fenced = _FENCE.search(text)
    block = fenced.group(1) if fenced else text
    try:
        docs = list(yaml.safe_load_all(block))
    except yaml.YAMLError as exc:
        raise Unparseable(f"generated data is not parseable: {exc}")
    for doc in docs:
        if doc is None:
            continue
        if isinstance(doc, list):
            yield from (item for item in doc if isinstance(item, dict))
        elif isinstance(doc, dict):
            yield doc
        else:
            raise Unparseable(f"unreadable instance document: {doc!r}")


def _instance_to_object(schema: SchemaSpec, cls: ClassSpec, values: dict,
                        seen_ids: "set[str]") -> CuratedObject:
    identifier = next((a.name for a in cls.attributes.values() if a.identifier), None)
    label = str(values.get(identifier, "")) if identifier else ""
    if not label:
        label = next((str(v) for v in values.values() if isinstance(v, str) and v), cls.name)
    try:
        obj_id = mint_id(label, seen_ids)
    except EmptyAfterNormalization:
        obj_id = mint_id(cls.name, seen_ids)
    definition = values.get("description")
    extras = {
        k: v
        for k, v in values.items()
        if k != identifier and k != "description" and v is not None
    }
    return CuratedObject(
        id=obj_id,
        label=label,
        definition=str(definition) if isinstance(definition, str) else None,
        extras=extras,
    )


def agent_bootstrap_data(schema: SchemaSpec, count: int, *, provider) -> "list[DataInstance]":
    """Generate sample instances of the schema's main class and validate them."""
    if count < 1:
        raise ValueError("count must be >= 1")
    main = schema.main_class()
    if main is None:
        raise InvalidSchema(f"schema {schema.name!r} defines no instantiable class")
    prompt = build_prompt(
        "bootstrap_data",
        count=str(count),
        class_name=main.name,
        schema=render_schema(schema).strip(),
    )
    documents = list(_instance_documents(provider.complete(prompt).text))
    if not documents:
        raise Unparseable("generated data held no instances")

    instances = []
    seen_ids: set[str] = set()
    for values in documents:
        violations = tuple(validate_instance(schema, main.name, values))
        obj = _instance_to_object(schema, main, values, seen_ids)
        seen_ids.add(obj.id)
        instances.append(DataInstance(values=values, obj=obj, violations=violations))
    return instances
