"""Lightweight class/attribute schemas for structured knowledge bases.

Schemas describe named classes with typed attributes, plus enums of
permissible values. Attribute ranges resolve to the builtin text type,
another class, or an enum. One class may be marked ``tree_root`` to act
as the container for serialized instance trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from .errors import InvalidSchema

TEXT_RANGE = "string"
_BUILTIN_RANGES = {"string", "integer", "float", "boolean"}


@dataclass
class AttributeSpec:
    name: str
    description: str = ""
    range: str = TEXT_RANGE
    required: bool = False
    identifier: bool = False
    multivalued: bool = False
    repaired: bool = False


@dataclass
class ClassSpec:
    name: str
    description: str = ""
    tree_root: bool = False
    attributes: "dict[str, AttributeSpec]" = field(default_factory=dict)


@dataclass
class EnumSpec:
    name: str
    values: "list[str]" = field(default_factory=list)


@dataclass
class SchemaSpec:
    name: str
    description: str = ""
    classes: "dict[str, ClassSpec]" = field(default_factory=dict)
    enums: "dict[str, EnumSpec]" = field(default_factory=dict)

    @property
    def tree_root_class(self) -> "ClassSpec | None":
        for cls in self.classes.values():
            if cls.tree_root:
                return cls
        return None

    def main_class(self) -> "ClassSpec | None":
        """The class the container holds, or the first non-root class."""
        root = self.tree_root_class
        if root is not None:
            for attr in root.attributes.values():
                if attr.range in self.classes:
                    return self.classes[attr.range]
        for cls in self.classes.values():
            if not cls.tree_root:
                return cls
        return None


@dataclass
class Violation:
    path: str
    message: str

    def as_text(self) -> str:
        return f"{self.path}: {self.message}"


def _as_bool(value) -> bool:
    return bool(value)


def schema_from_mapping(data) -> SchemaSpec:
    if not isinstance(data, dict):
        raise InvalidSchema("schema document must be a mapping")
    schema = SchemaSpec(
        name=str(data.get("name") or data.get("id") or "schema"),
        description=str(data.get("description") or ""),
    )
    classes = data.get("classes") or {}
    if not isinstance(classes, dict):
        raise InvalidSchema("'classes' must map class names to definitions")
    for cls_name, cls_body in classes.items():
        cls_body = cls_body or {}
        if not isinstance(cls_body, dict):
            raise InvalidSchema(f"class {cls_name!r} must be a mapping")
        cls = ClassSpec(
            name=str(cls_name),
            description=str(cls_body.get("description") or ""),
            tree_root=_as_bool(cls_body.get("tree_root")),
        )
        attrs = cls_body.get("attributes") or {}
        if not isinstance(attrs, dict):
            raise InvalidSchema(f"attributes of {cls_name!r} must be a mapping")
        for attr_name, attr_body in attrs.items():
            attr_body = attr_body or {}
            if not isinstance(attr_body, dict):
                raise InvalidSchema(f"attribute {cls_name}.{attr_name} must be a mapping")
            cls.attributes[str(attr_name)] = AttributeSpec(
                name=str(attr_name),
                description=str(attr_body.get("description") or ""),
                range=str(attr_body.get("range") or TEXT_RANGE),
                required=_as_bool(attr_body.get("required")),
                identifier=_as_bool(attr_body.get("identifier")),
                multivalued=_as_bool(attr_body.get("multivalued")),
                repaired=_as_bool(attr_body.get("repaired")),
            )
        schema.classes[cls.name] = cls
    enums = data.get("enums") or {}
    if not isinstance(enums, dict):
        raise InvalidSchema("'enums' must map enum names to definitions")
    for enum_name, enum_body in enums.items():
        enum_body = enum_body or {}
        values = enum_body.get("permissible_values") or {}
        if isinstance(values, dict):
            names = [str(v) for v in values]
        elif isinstance(values, list):
            names = [str(v) for v in values]
        else:
            raise InvalidSchema(f"permissible_values of {enum_name!r} must be a mapping or list")
        schema.enums[str(enum_name)] = EnumSpec(name=str(enum_name), values=names)
    return schema


def schema_to_mapping(schema: SchemaSpec) -> dict:
    out: dict = {"name": schema.name}
    if schema.description:
        out["description"] = schema.description
    out["classes"] = {}
    for cls in schema.classes.values():
        body: dict = {}
        if cls.description:
            body["description"] = cls.description
        if cls.tree_root:
            body["tree_root"] = True
        body["attributes"] = {}
        for attr in cls.attributes.values():
            attr_body: dict = {}
            if attr.description:
                attr_body["description"] = attr.description
            if attr.range != TEXT_RANGE:
                attr_body["range"] = attr.range
            for flag in ("required", "identifier", "multivalued", "repaired"):
                if getattr(attr, flag):
                    attr_body[flag] = True
            body["attributes"][attr.name] = attr_body
        out["classes"][cls.name] = body
    if schema.enums:
        out["enums"] = {
            enum.name: {"permissible_values": {v: None for v in enum.values}}
            for enum in schema.enums.values()
        }
    return out


def parse_schema_text(text: str) -> SchemaSpec:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise InvalidSchema(f"schema text is not valid YAML: {exc}")
    return schema_from_mapping(data)


def render_schema(schema: SchemaSpec) -> str:
    return yaml.safe_dump(schema_to_mapping(schema), sort_keys=False, allow_unicode=True)


def validate_schema(schema: SchemaSpec) -> "list[str]":
    """Structural checks; returns human-readable problems, empty when sound."""
    problems: list[str] = []
    if not schema.classes:
        problems.append("schema defines no classes")
    roots = [c.name for c in schema.classes.values() if c.tree_root]
    if len(roots) > 1:
        problems.append(f"multiple tree_root classes: {', '.join(roots)}")
    for cls in schema.classes.values():
        identifiers = [a.name for a in cls.attributes.values() if a.identifier]
        if len(identifiers) > 1:
            problems.append(
                f"class {cls.name} has multiple identifier attributes: {', '.join(identifiers)}"
            )
        for attr in cls.attributes.values():
            rng = attr.range
            if rng in _BUILTIN_RANGES or rng in schema.classes or rng in schema.enums:
                continue
            problems.append(f"attribute {cls.name}.{attr.name} has unknown range {rng!r}")
    return problems


def repair_schema(schema: SchemaSpec, class_name: str, attribute_names: "list[str]") -> "list[str]":
    """Ensure the named class carries every requested attribute.

    Missing ones are added as plain text attributes flagged ``repaired``.
    Returns the names actually added; calling again is a no-op.
    """
    if class_name not in schema.classes:
        raise InvalidSchema(f"cannot repair unknown class {class_name!r}")
    cls = schema.classes[class_name]
    added: list[str] = []
    for name in attribute_names:
        if name in cls.attributes:
            continue
        cls.attributes[name] = AttributeSpec(name=name, range=TEXT_RANGE, repaired=True)
        added.append(name)
    return added


def _check_value(schema: SchemaSpec, attr: AttributeSpec, value, path: str,
                 out: "list[Violation]") -> None:
    rng = attr.range
    if rng in schema.enums:
        if not isinstance(value, str) or value not in schema.enums[rng].values:
            allowed = ", ".join(schema.enums[rng].values)
            out.append(Violation(path, f"value {value!r} not one of [{allowed}]"))
    elif rng in schema.classes:
        if isinstance(value, dict):
            out.extend(validate_instance(schema, rng, value, path=path))
        elif not isinstance(value, str):
            # a bare string is read as a reference to an instance by identifier
            out.append(Violation(path, f"expected a {rng} mapping or reference"))
    elif rng == "integer":
        if not isinstance(value, int) or isinstance(value, bool):
            out.append(Violation(path, f"expected an integer, got {value!r}"))
    elif rng == "float":
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            out.append(Violation(path, f"expected a number, got {value!r}"))
    elif rng == "boolean":
        if not isinstance(value, bool):
            out.append(Violation(path, f"expected a boolean, got {value!r}"))
    else:
        if not isinstance(value, str):
            out.append(Violation(path, f"expected text, got {value!r}"))


def validate_instance(schema: SchemaSpec, class_name: str, data,
                      path: str = "") -> "list[Violation]":
    """Check one instance mapping against its class; recurses into nested ones."""
    base = path or class_name
    out: list[Violation] = []
    if class_name not in schema.classes:
        return [Violation(base, f"unknown class {class_name!r}")]
    if not isinstance(data, dict):
        return [Violation(base, "instance must be a mapping")]
    cls = schema.classes[class_name]
    for attr in cls.attributes.values():
        here = f"{base}.{attr.name}"
        value = data.get(attr.name)
        if value is None:
            if attr.required or attr.identifier:
                out.append(Violation(here, "required attribute is missing"))
            continue
        if attr.multivalued:
            if not isinstance(value, list):
                out.append(Violation(here, "expected a list"))
                continue
            for i, item in enumerate(value):
                _check_value(schema, attr, item, f"{here}[{i}]", out)
        else:
            _check_value(schema, attr, value, here, out)
    for key in data:
        if key not in cls.attributes:
            out.append(Violation(f"{base}.{key}", f"not an attribute of {class_name}"))
    return out
