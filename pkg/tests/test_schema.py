import pytest

from curation_engine.errors import InvalidSchema
from curation_engine.schema import (
    SchemaSpec,
    parse_schema_text,
    render_schema,
    repair_schema,
    schema_from_mapping,
    schema_to_mapping,
    validate_instance,
    validate_schema,
)

ANTIBIOTICS_SCHEMA = """
name: livestock_antibiotics
description: Antibiotics used in livestock, with species and side effects.
classes:
  Container:
    tree_root: true
    attributes:
      members:
        range: Antibiotic
        multivalued: true
  Antibiotic:
    attributes:
      name:
        identifier: true
        required: true
      description: {}
      associated_species:
        range: Species
        multivalued: true
      common_uses:
        range: UseCase
        multivalued: true
      side_effects:
        range: SideEffect
        multivalued: true
  Species:
    attributes:
      scientific_name:
        identifier: true
        required: true
      common_name: {}
      classification: {}
  UseCase:
    attributes:
      use_description:
        identifier: true
        required: true
      dosage: {}
  SideEffect:
    attributes:
      effect_description:
        identifier: true
        required: true
      severity:
        range: SeverityLevelEnum
enums:
  SeverityLevelEnum:
    permissible_values:
      LOW:
      MEDIUM:
      HIGH:
"""


@pytest.fixture
def schema():
    return parse_schema_text(ANTIBIOTICS_SCHEMA)


class TestParsing:
    def test_classes_and_enums_read(self, schema):
        assert set(schema.classes) == {"Container", "Antibiotic", "Species", "UseCase", "SideEffect"}
        assert schema.enums["SeverityLevelEnum"].values == ["LOW", "MEDIUM", "HIGH"]

    def test_tree_root_and_main_class(self, schema):
        assert schema.tree_root_class.name == "Container"
        assert schema.main_class().name == "Antibiotic"

    def test_attribute_flags(self, schema):
        name = schema.classes["Antibiotic"].attributes["name"]
        assert name.identifier and name.required
        members = schema.classes["Container"].attributes["members"]
        assert members.multivalued and members.range == "Antibiotic"

    def test_mapping_round_trip(self, schema):
        again = schema_from_mapping(schema_to_mapping(schema))
        assert again == schema

    def test_render_reparses(self, schema):
        assert parse_schema_text(render_schema(schema)) == schema

    def test_bad_yaml_rejected(self):
        with pytest.raises(InvalidSchema):
            parse_schema_text("classes: [not: {a mapping")

    def test_non_mapping_rejected(self):
        with pytest.raises(InvalidSchema):
            parse_schema_text("- just\n- a list")


class TestValidateSchema:
    def test_sound_schema_has_no_problems(self, schema):
        assert validate_schema(schema) == []

    def test_unknown_range_flagged(self, schema):
        schema.classes["Antibiotic"].attributes["name"].range = "Ghost"
        assert any("Ghost" in p for p in validate_schema(schema))

    def test_multiple_roots_flagged(self, schema):
        schema.classes["Antibiotic"].tree_root = True
        assert any("tree_root" in p for p in validate_schema(schema))

    def test_empty_schema_flagged(self):
        assert validate_schema(SchemaSpec(name="empty")) != []


class TestRepair:
    def test_missing_attributes_injected_as_text(self, schema):
        added = repair_schema(schema, "Antibiotic", ["associated_animals", "common_name"])
        assert added == ["associated_animals", "common_name"]
        attr = schema.classes["Antibiotic"].attributes["associated_animals"]
        assert attr.range == "string" and attr.repaired

    def test_existing_attributes_untouched(self, schema):
        added = repair_schema(schema, "Antibiotic", ["description"])
        assert added == []
        assert not schema.classes["Antibiotic"].attributes["description"].repaired

    def test_repair_is_idempotent(self, schema):
        repair_schema(schema, "Antibiotic", ["associated_animals"])
        assert repair_schema(schema, "Antibiotic", ["associated_animals"]) == []

    def test_unknown_class_rejected(self, schema):
        with pytest.raises(InvalidSchema):
            repair_schema(schema, "Ghost", ["x"])


TETRACYCLINE = {
    "name": "Tetracycline",
    "description": "A broad-spectrum antibiotic.",
    "associated_species": [
        {"scientific_name": "Bos taurus", "common_name": "cattle"},
    ],
    "common_uses": [{"use_description": "respiratory disease"}],
    "side_effects": [
        {"effect_description": "tooth discoloration", "severity": "LOW"},
    ],
}


class TestValidateInstance:
    def test_valid_instance(self, schema):
        assert validate_instance(schema, "Antibiotic", TETRACYCLINE) == []

    def test_missing_identifier(self, schema):
        bad = dict(TETRACYCLINE)
        del bad["name"]
        violations = validate_instance(schema, "Antibiotic", bad)
        assert any("name" in v.path and "missing" in v.message for v in violations)

    def test_bad_enum_value(self, schema):
        bad = {
            "name": "X",
            "side_effects": [{"effect_description": "nausea", "severity": "EXTREME"}],
        }
        violations = validate_instance(schema, "Antibiotic", bad)
        assert any("severity" in v.path for v in violations)

    def test_multivalued_needs_list(self, schema):
        bad = {"name": "X", "common_uses": {"use_description": "oops"}}
        violations = validate_instance(schema, "Antibiotic", bad)
        assert any("expected a list" in v.message for v in violations)

    def test_nested_violations_carry_paths(self, schema):
        bad = {"name": "X", "associated_species": [{"common_name": "cow"}]}
        violations = validate_instance(schema, "Antibiotic", bad)
        assert any(v.path == "Antibiotic.associated_species[0].scientific_name"
                   for v in violations)

    def test_unknown_attribute_flagged(self, schema):
        violations = validate_instance(schema, "Antibiotic", {"name": "X", "color": "red"})
        assert any("color" in v.path for v in violations)

    def test_reference_by_identifier_allowed(self, schema):
        inst = {"name": "X", "associated_species": ["Bos taurus"]}
        assert validate_instance(schema, "Antibiotic", inst) == []

    def test_unknown_class(self, schema):
        assert validate_instance(schema, "Ghost", {}) != []

    def test_container_tree(self, schema):
        tree = {"members": [TETRACYCLINE, {"name": "Penicillin"}]}
        assert validate_instance(schema, "Container", tree) == []
