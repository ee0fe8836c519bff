"""Turning model output back into typed objects.

Generated text arrives with code fences, lead-in prose, and loosely typed
values. The parser peels those away and reads the remaining key/value
block in the same dialect ``canonical_serialize`` writes, so serialize
then parse is the identity for valid objects.
"""

from __future__ import annotations

import re
import unicodedata

import yaml

from ..errors import EmptyAfterNormalization, NoLabelNoId, Unparseable
from ..objects import CORE_FIELDS, CuratedObject, Relationship

_FIELD_LINE = re.compile(r'^("?)[A-Za-z_][\w-]*\1:(\s|$)')
_FENCE = re.compile(r"```[^\n]*\n(.*?)```", re.DOTALL)
_TOKEN_SPLIT = re.compile(r"[\W_]+", re.UNICODE)


def mint_id(label: str, existing: "set[str] | dict | tuple | list" = ()) -> str:
    """Derive a CamelCase id from a label.

    Tokens keep their inner casing; accented letters fold to ASCII and
    anything unmappable is dropped. When the result is already taken an
    ``_2``, ``_3``, ... suffix is appended.
    """
    parts: list[str] = []
    for token in _TOKEN_SPLIT.split(label):
        folded = unicodedata.normalize("NFKD", token)
        cleaned = "".join(c for c in folded if c.isascii() and c.isalnum())
        if not cleaned:
            continue
        parts.append(cleaned[0].upper() + cleaned[1:])
    base = "".join(parts)
    if not base:
        raise EmptyAfterNormalization(f"label {label!r} has no usable characters")
    if base not in existing:
        return base
    n = 2
    while f"{base}_{n}" in existing:
        n += 1
    return f"{base}_{n}"


def _candidate_block(text: str) -> str:
    fenced = _FENCE.search(text)
    if fenced:
        return fenced.group(1)
    lines = text.splitlines()
    for i, line in enumerate(lines):
        if _FIELD_LINE.match(line):
            return "\n".join(lines[i:])
    raise Unparseable("no recognizable field lines in model output")


def _load_yaml_block(block: str) -> dict:
    try:
        data = yaml.safe_load(block)
    except yaml.YAMLError:
        data = None
    if not isinstance(data, dict):
        # trailing prose can break the parse; keep only lines that look
        # like part of the key/value block and retry
        kept: list[str] = []
        for line in block.splitlines():
            if (
                not line.strip()
                or line[0] in " \t"
                or line.startswith("- ")
                or _FIELD_LINE.match(line)
            ):
                kept.append(line)
            elif kept:
                break
        try:
            data = yaml.safe_load("\n".join(kept))
        except yaml.YAMLError as exc:
            raise Unparseable(f"model output is not a parseable field block: {exc}")
    if not isinstance(data, dict) or not data:
        raise Unparseable("model output did not contain a field mapping")
    return data


def _parse_relationships(value) -> "list[Relationship]":
    if value is None:
        return []
    if not isinstance(value, list):
        raise Unparseable(f"relationships must be a list, got {type(value).__name__}")
    rels: list[Relationship] = []
    for item in value:
        if isinstance(item, dict) and "predicate" in item and "target" in item:
            rels.append(Relationship(str(item["predicate"]), str(item["target"])))
        elif isinstance(item, dict) and len(item) == 1:
            ((pred, target),) = item.items()
            rels.append(Relationship(str(pred), str(target)))
        else:
            raise Unparseable(f"unreadable relationship entry: {item!r}")
    return rels


def load_reply_mapping(text: str) -> dict:
    """The field mapping inside generated text, fences and prose stripped."""
    return _load_yaml_block(_candidate_block(text))


def load_reply_list(text: str) -> list:
    """A YAML list inside generated text; empty when there is none."""
    fenced = _FENCE.search(text)
    block = fenced.group(1) if fenced else text
    try:
        data = yaml.safe_load(block)
    except yaml.YAMLError:
        return []
    if data is None:
        return []
    if isinstance(data, dict):
        return [data]
    if not isinstance(data, list):
        return []
    return data


def object_from_mapping(data: dict, existing_ids: "set[str] | tuple | list" = ()) -> CuratedObject:
    """Build a curated object from an already-parsed field mapping."""
    data = {str(k).strip(): v for k, v in data.items() if v is not None}

    label = data.pop("label", None)
    obj_id = data.pop("id", None)
    if obj_id is None:
        if label is None:
            raise NoLabelNoId("output names neither an id nor a label")
        obj_id = mint_id(str(label), existing_ids)

    aliases = data.pop("aliases", None)
    if isinstance(aliases, str):
        aliases = [aliases]
    elif aliases is not None:
        aliases = [str(a) for a in aliases]

    relationships = _parse_relationships(data.pop("relationships", None))
    definition = data.pop("definition", None)
    original_id = data.pop("original_id", None)

    return CuratedObject(
        id=str(obj_id),
        label="" if label is None else str(label),
        definition=None if definition is None else str(definition),
        aliases=aliases,
        relationships=relationships,
        original_id=None if original_id is None else str(original_id),
        extras={k: v for k, v in data.items() if k not in CORE_FIELDS},
    )


def parse_llm_object(text: str, existing_ids: "set[str] | tuple | list" = ()) -> CuratedObject:
    """Parse generated text into a curated object.

    Raises Unparseable when no field block can be found, NoLabelNoId when
    the block names neither an id nor a label.
    """
    return object_from_mapping(load_reply_mapping(text), existing_ids)
