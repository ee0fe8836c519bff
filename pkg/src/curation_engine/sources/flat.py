"""Static ingest of JSON, YAML, and delimited flat files."""

from __future__ import annotations

import csv
import json
from enum import Enum
from pathlib import Path

import yaml

from ..errors import MissingField, ParseError
from ..objects import CuratedObject


class FlatFormat(Enum):
    JSON = "json"
    YAML = "yaml"
    CSV = "csv"
    TSV = "tsv"

    @classmethod
    def parse(cls, value: "str | FlatFormat") -> "FlatFormat":
        if isinstance(value, cls):
            return value
        try:
            return cls[str(value).upper()]
        except KeyError:
            raise ValueError(f"unknown flat format {value!r}; use json, yaml, csv, or tsv")

    @classmethod
    def from_path(cls, path: "str | Path") -> "FlatFormat":
        suffix = Path(path).suffix.lower().lstrip(".")
        mapping = {"json": cls.JSON, "yaml": cls.YAML, "yml": cls.YAML,
                   "csv": cls.CSV, "tsv": cls.TSV}
        if suffix not in mapping:
            raise ValueError(f"cannot infer format from suffix {suffix!r}")
        return mapping[suffix]


def _read_rows(path: Path, fmt: FlatFormat) -> "list[dict]":
    try:
        if fmt is FlatFormat.JSON:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        elif fmt is FlatFormat.YAML:
            with open(path, "r", encoding="utf-8") as fh:
                data = yaml.safe_load(fh)
        else:
            delim = "," if fmt is FlatFormat.CSV else "\t"
            with open(path, "r", encoding="utf-8", newline="") as fh:
                return [dict(row) for row in csv.DictReader(fh, delimiter=delim)]
    except (OSError, ValueError, yaml.YAMLError) as exc:
        raise ParseError(f"cannot read {fmt.value} file {path}: {exc}")
    if data is None:
        return []
    if not isinstance(data, list) or not all(isinstance(r, dict) for r in data):
        raise ParseError(f"{path} must hold a list of mappings")
    return data


def load_flat(
    path: "str | Path",
    format: "str | FlatFormat | None" = None,
    id_field: str = "id",
    label_field: str = "label",
) -> "list[CuratedObject]":
    """Each row becomes one object; ids missing from a row are minted."""
    # function-level import: agents depends on sources, a module-level one cycles
    from ..agents.parsing import mint_id

    path = Path(path)
    fmt = FlatFormat.from_path(path) if format is None else FlatFormat.parse(format)
    objects: list[CuratedObject] = []
    taken: set[str] = set()
    for row_no, row in enumerate(_read_rows(path, fmt), start=1):
        row = dict(row)
        raw_id = row.pop(id_field, None)
        label = row.pop(label_field, None)
        if raw_id in (None, ""):
            if label in (None, ""):
                raise MissingField(
                    f"row {row_no} has neither {id_field!r} nor {label_field!r}"
                )
            obj_id = mint_id(str(label), taken)
        else:
            obj_id = str(raw_id)
        taken.add(obj_id)

        definition = row.pop("definition", None)
        original_id = row.pop("original_id", None)
        aliases = row.pop("aliases", None)
        if aliases is not None and not isinstance(aliases, list):
            row["aliases_text"] = aliases  # delimited files cannot express lists
            aliases = None
        objects.append(CuratedObject(
            id=obj_id,
            label="" if label is None else str(label),
            definition=None if definition in (None, "") else str(definition),
            aliases=[str(a) for a in aliases] if aliases else None,
            original_id=None if original_id in (None, "") else str(original_id),
            extras={k: v for k, v in row.items() if v not in (None, "")},
        ))
    return objects
