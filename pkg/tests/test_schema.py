import json

import jsonschema
import pytest

from jsonlens.errors import SchemaRefError, UnsupportedRefError
from jsonlens.jsonc import KeyPath, parse
from jsonlens.schema import (
    SchemaNode,
    infer_schema_set,
    load_schema,
    synthesize_minimal,
    validate,
)


def test_load_inline_number_schema():
    doc = load_schema('{"type":"number"}')
    assert doc.root.type_names == ("number",)


def test_load_resolves_definition_refs():
    doc = load_schema('{"$ref":"#/definitions/A","definitions":{"A":{"type":"string"}}}')
    target = doc.node_at("#/definitions/A")
    assert target.name == "A"
    assert target.type_names == ("string",)


def test_load_rejects_dangling_ref():
    with pytest.raises(SchemaRefError):
        load_schema('{"$ref":"#/definitions/Missing"}')


def test_load_rejects_external_ref():
    with pytest.raises(UnsupportedRefError):
        load_schema('{"$ref":"https://example.com/x.json#/definitions/A"}')


def test_cycles_are_recorded_not_fatal(cyclic_schema):
    assert "#/definitions/node" in cyclic_schema.cycles


def test_unsupported_keywords_recorded():
    doc = load_schema('{"type":"string","pattern":"^a","format":"email"}')
    assert doc.root.unsupported_keywords == ("format", "pattern")


# --- inference ---


def test_infer_produce_kind_enum(produce_schema):
    entries = infer_schema_set(produce_schema, KeyPath.of("kind"))
    # oracle: hand-walk of the fixture document
    raw = json.loads(open("fixtures/produce.schema.json").read())
    assert entries.enum_options() == tuple(raw["properties"]["kind"]["enum"])


def test_infer_encoding_type_exposes_field_kinds(chart_schema):
    entries = infer_schema_set(chart_schema, KeyPath.of("encoding", "x", "type"))
    options = entries.enum_options()
    assert "nominal" in options and "ordinal" in options


def test_infer_through_additional_properties(tracery_schema):
    entries = infer_schema_set(tracery_schema, KeyPath.of("anything"))
    assert len(entries.entries) == 1
    assert entries.entries[0].type_names == ("array",)


def test_infer_unreachable_path_is_empty(produce_schema):
    assert not infer_schema_set(produce_schema, KeyPath.of("kind", "deeper"))


def test_infer_keeps_alternation_branches_unfiltered(chart_schema):
    entries = infer_schema_set(chart_schema, KeyPath.of("mark"))
    names = entries.names()
    assert "markType" in names and "markDef" in names


def test_infer_is_deterministic(chart_schema):
    a = infer_schema_set(chart_schema, KeyPath.of("encoding", "x"))
    b = infer_schema_set(chart_schema, KeyPath.of("encoding", "x"))
    assert a == b


def test_monotone_path_refinement(chart_schema):
    # entries at p ++ [step] derive only from entries at p
    from jsonlens.schema import descend
    from jsonlens.jsonc import Key

    parent = infer_schema_set(chart_schema, KeyPath.of("encoding"))
    child = infer_schema_set(chart_schema, KeyPath.of("encoding", "x"))
    derived = descend(chart_schema, parent.entries, Key("x"))
    assert child.entries == tuple(derived)


# --- synthesis ---


def test_synthesize_object_with_required_enum():
    doc = load_schema(
        '{"type":"object","required":["mark"],"properties":{"mark":{"enum":["bar","point"]}}}'
    )
    result = synthesize_minimal(doc, doc.root)
    assert result.value == {"mark": "bar"}
    assert not result.truncated
    jsonschema.validate(result.value, doc.raw)  # independent oracle


def test_synthesize_bare_array():
    doc = load_schema('{"type":"array"}')
    assert synthesize_minimal(doc, doc.root).value == []


def test_synthesize_truncates_self_reference():
    doc = load_schema(
        '{"$ref":"#/definitions/L","definitions":{"L":{"type":"object","required":["next"],'
        '"properties":{"next":{"$ref":"#/definitions/L"}}}}}'
    )
    result = synthesize_minimal(doc, doc.root, depth_limit=2)
    assert result.truncated
    assert result.value == {"next": None}


def _all_definitions(doc):
    yield "#", doc.root
    for name, node in doc.definitions.items():
        yield name, node


@pytest.mark.parametrize("fixture", ["produce_schema", "chart_schema", "tracery_schema"])
def test_synthesis_sound_for_every_definition(fixture, request):
    doc = request.getfixturevalue(fixture)
    for name, node in _all_definitions(doc):
        result = synthesize_minimal(doc, node, depth_limit=16)
        if result.truncated:
            continue
        schema = dict(node.schema) if isinstance(node.schema, dict) else node.schema
        if isinstance(schema, dict):
            # keep definitions resolvable when validating a fragment as root
            schema.setdefault("definitions", doc.raw.get("definitions", {}))
        jsonschema.validate(result.value, schema)


def test_synthesis_deterministic(chart_schema):
    a = synthesize_minimal(chart_schema, chart_schema.root)
    b = synthesize_minimal(chart_schema, chart_schema.root)
    assert a == b
    assert json.dumps(a.value, sort_keys=True) == json.dumps(b.value, sort_keys=True)


# --- validation ---


def _jsonschema_ok(value, raw_schema):
    try:
        jsonschema.validate(value, raw_schema)
        return True
    except jsonschema.ValidationError:
        return False


@pytest.mark.parametrize(
    "text",
    [
        '{"kind":"fruit"}',
        '{"kind":"meat"}',
        '{"kind":"fruit","name":"plum","price":1.5,"organic":true,"tags":["a"]}',
        '{"kind":"fruit","price":-3}',
        '{"kind":"fruit","bogus":1}',
        '{"kind":"fruit","origin":{"country":"BR"}}',
        '{"kind":"fruit","origin":{}}',
        '{"kind":"fruit","tags":"notarray"}',
    ],
)
def test_validation_agrees_with_reference_validator(text, produce_schema):
    tree = parse(text)
    ours = validate(tree, produce_schema)
    errors = [d for d in ours if d.severity == "error"]
    assert (not errors) == _jsonschema_ok(json.loads(text), produce_schema.raw), (text, ours)


def test_validation_enum_violation_location(produce_schema):
    diags = validate(parse('{"kind":"meat"}'), produce_schema)
    assert len(diags) == 1
    assert diags[0].rule == "enum"
    assert diags[0].key_path == KeyPath.of("kind")


def test_validation_empty_document_reports_required(produce_schema):
    diags = validate(parse(""), produce_schema)
    assert len(diags) == 1
    assert diags[0].rule == "required"
    assert diags[0].key_path == KeyPath()


def test_validation_skips_error_subtrees(produce_schema):
    diags = validate(parse('{"kind": nope}'), produce_schema)
    assert all(d.rule != "type" for d in diags)


def test_validation_alternation_reports_fewest_violations():
    doc = load_schema(
        '{"anyOf":[{"type":"object","required":["a","b","c"]},'
        '{"type":"object","required":["a"]}]}'
    )
    diags = validate(parse("{}"), doc)
    assert len(diags) == 1  # branch two: one missing property, not three
    assert "'a'" in diags[0].message


def test_validation_alternation_passes_when_any_branch_passes(chart_schema):
    tree = parse('{"mark": {"type": "bar", "opacity": 0.5}, "encoding": {}}')
    assert validate(tree, chart_schema) == []


def test_validation_duplicate_key_warns(produce_schema):
    diags = validate(parse('{"kind":"fruit","kind":"fruit"}'), produce_schema)
    warnings = [d for d in diags if d.severity == "warning"]
    assert warnings and warnings[0].rule == "duplicateKey"


def test_validation_diagnostic_paths_resolve(produce_schema, chart_schema):
    for text, doc in [
        ('{"kind":"meat","price":-1,"bogus":3}', produce_schema),
        ('{"mark":"nope","encoding":{"x":{"field":1,"type":"bad"}}}', chart_schema),
    ]:
        tree = parse(text)
        for diag in validate(tree, doc):
            assert tree.resolve_key_path(diag.key_path) is not None, diag
