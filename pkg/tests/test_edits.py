import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jsonlens.edits import (
    DELETE_NODE,
    DUPLICATE_NODE,
    FORMAT_DOCUMENT,
    INSERT_ARRAY_ELEMENT,
    INSERT_PROPERTY,
    MOVE_SIBLING,
    RENAME_KEY,
    REPLACE_VALUE,
    SORT_OBJECT_KEYS,
    EditAction,
    TextEdit,
    apply_edits,
    apply_edits_with_inverse,
    compile_action,
    format_document,
)
from jsonlens.errors import EditConflictError, KindError, PathError
from jsonlens.jsonc import Index, Key, KeyPath, Kind, parse
from conftest import random_well_formed_tree

def run(text, action):
    tree = parse(text)
    return apply_edits(text, compile_action(tree, action))


# --- apply ---


def test_apply_splice():
    assert apply_edits("abc", [TextEdit(1, 2, "X")]) == "aXc"


def test_apply_empty_batch_is_identity():
    assert apply_edits("abc", []) == "abc"


def test_apply_equals_sequential_descending_splice():
    rnd = random.Random(7)
    for _ in range(200):
        text = "".join(rnd.choice("abcdefé🌀") for _ in range(rnd.randint(0, 30)))
        data = text.encode("utf-8")
        boundaries = sorted(
            rnd.sample(range(len(text) + 1), k=min(len(text) + 1, 4))
        )
        # map char positions to byte offsets so edits stay codepoint-aligned
        byte_of = [len(text[:i].encode("utf-8")) for i in range(len(text) + 1)]
        edits = []
        for a, b in zip(boundaries, boundaries[1:]):
            if rnd.random() < 0.6:
                edits.append(TextEdit(byte_of[a], byte_of[b], rnd.choice(["", "Z", "!!"])))
        expected = data
        for edit in sorted(edits, key=lambda e: e.start, reverse=True):
            expected = expected[: edit.start] + edit.new_text.encode("utf-8") + expected[edit.end :]
        assert apply_edits(text, edits) == expected.decode("utf-8")


def test_apply_rejects_overlap():
    with pytest.raises(EditConflictError):
        apply_edits("abcdef", [TextEdit(0, 3, "x"), TextEdit(2, 4, "y")])


def test_apply_rejects_out_of_range():
    with pytest.raises(EditConflictError):
        apply_edits("ab", [TextEdit(0, 9, "x")])


def test_inverse_restores_original():
    rnd = random.Random(11)
    for _ in range(100):
        tree = random_well_formed_tree(rnd)
        text = tree.text
        nodes = [n for n in tree.walk()]
        node = rnd.choice(nodes)
        edits = [TextEdit(node.start, node.end, rnd.choice(["null", "[1]", ""]))]
        after, inverse = apply_edits_with_inverse(text, edits)
        assert apply_edits(after, inverse) == text


# --- compile: spec'd examples ---


def test_insert_property_after_last_member():
    assert run('{"a": 1}', EditAction(INSERT_PROPERTY, KeyPath(), name="b", value=2)) == '{"a": 1, "b": 2}'


def test_insert_property_requires_object():
    with pytest.raises(KindError):
        run("[1]", EditAction(INSERT_PROPERTY, KeyPath(), name="b", value=2))


def test_delete_sole_member_removes_comma_context():
    assert run('{"a": 1}', EditAction(DELETE_NODE, KeyPath.of("a"))) == "{}"


def test_move_sibling_keeps_spacing():
    assert run("[1, 2]", EditAction(MOVE_SIBLING, KeyPath.of(0), direction=1)) == "[2, 1]"


def test_move_out_of_range_is_path_error():
    with pytest.raises(PathError):
        run("[1, 2]", EditAction(MOVE_SIBLING, KeyPath.of(1), direction=1))


def test_unresolvable_path_is_path_error():
    with pytest.raises(PathError):
        run("{}", EditAction(DELETE_NODE, KeyPath.of("ghost")))


def test_replace_value_fills_missing_slot():
    assert run('{"a": }', EditAction(REPLACE_VALUE, KeyPath.of("a"), value=5)) == '{"a": 5}'


def test_rename_key_preserves_value_bytes():
    assert run('{"a":  1e3}', EditAction(RENAME_KEY, KeyPath.of("a"), name="z")) == '{"z":  1e3}'


def test_sort_keys_reorders_member_text():
    assert run('{"b": 2, "a": 1}', EditAction(SORT_OBJECT_KEYS, KeyPath())) == '{"a": 1, "b": 2}'


def test_insert_element_positions():
    assert run("[2, 3]", EditAction(INSERT_ARRAY_ELEMENT, KeyPath(), index=0, value=1)) == "[1, 2, 3]"
    assert run("[1, 2]", EditAction(INSERT_ARRAY_ELEMENT, KeyPath(), index=2, value=3)) == "[1, 2, 3]"
    assert run("[]", EditAction(INSERT_ARRAY_ELEMENT, KeyPath(), index=0, value=1)) == "[1]"


def test_duplicate_array_element():
    assert run("[1, 2]", EditAction(DUPLICATE_NODE, KeyPath.of(0))) == "[1, 1, 2]"


def test_insert_reparse_structural_oracle():
    # oracle: reparse and compare the value tree against a dict-level mutation
    text = '{\n  "a": {"x": true},\n  "b": [1, 2]\n}'
    tree = parse(text)
    out = apply_edits(
        text, compile_action(tree, EditAction(INSERT_PROPERTY, KeyPath.of("a"), name="y", value=[1]))
    )
    expected = json.loads(text)
    expected["a"]["y"] = [1]
    reparsed = parse(out)
    assert reparsed.is_well_formed
    assert reparsed.to_value() == expected


def test_delete_keeps_comment_between_member_and_comma():
    out = run('{"a":1 /*keep*/, "b":2}', EditAction(DELETE_NODE, KeyPath.of("a")))
    assert "/*keep*/" in out
    assert parse(out).to_value() == {"b": 2}


def test_format_document_pins_comments_before_nodes():
    out = run('{"b":2, // about a\n"a":1}', EditAction(FORMAT_DOCUMENT))
    tree = parse(out)
    assert tree.is_well_formed
    assert tree.to_value() == {"b": 2, "a": 1}
    lines = out.splitlines()
    comment_line = next(i for i, l in enumerate(lines) if "about a" in l)
    assert '"a"' in lines[comment_line + 1]


def test_format_is_idempotent():
    texts = ['{"b":2,"a":[1,2],"c":{"d":null}}', "[1,2,3]", "42", '// c\n{"a":1}']
    for text in texts:
        once = format_document(parse(text))
        twice = format_document(parse(once))
        assert once == twice, text


def test_format_uses_two_space_indent_no_trailing_commas():
    out = run('{"a": [1, 2,],}', EditAction(FORMAT_DOCUMENT))
    assert out == '{\n  "a": [\n    1,\n    2\n  ]\n}'


# --- properties ---


def _random_action(rnd, tree):
    """An action applicable to a random node of the tree."""
    nodes = list(tree.walk())
    node = rnd.choice(nodes)
    path = tree.key_path_of(node)
    target = tree.resolve_key_path(path)
    if target is None:
        return None
    value = rnd.choice([None, True, 0, 1.5, "s", [], {}, {"k": [1]}])
    choices = []
    if target.kind is Kind.OBJECT:
        name = f"new{rnd.randint(0, 999)}"
        choices.append(EditAction(INSERT_PROPERTY, path, name=name, value=value))
        if tree.properties(target):
            choices.append(EditAction(SORT_OBJECT_KEYS, path))
    if target.kind is Kind.ARRAY:
        n = len(tree.elements(target))
        choices.append(EditAction(INSERT_ARRAY_ELEMENT, path, index=rnd.randint(0, n), value=value))
    if path.steps:
        choices.append(EditAction(DELETE_NODE, path))
        choices.append(EditAction(DUPLICATE_NODE, path))
        last = path.steps[-1]
        if isinstance(last, Index):
            parent = tree.resolve_key_path(path.parent())
            n = len(tree.elements(parent))
            if last.i > 0:
                choices.append(EditAction(MOVE_SIBLING, path, direction=-1))
            if last.i < n - 1:
                choices.append(EditAction(MOVE_SIBLING, path, direction=1))
        if isinstance(last, Key):
            choices.append(EditAction(RENAME_KEY, path, name=f"r{rnd.randint(0, 999)}"))
    choices.append(EditAction(REPLACE_VALUE, path, value=value))
    choices.append(EditAction(FORMAT_DOCUMENT))
    return rnd.choice(choices)


@pytest.mark.parametrize("seed", range(5))
def test_random_actions_preserve_parse_health(seed):
    rnd = random.Random(seed)
    for _ in range(100):
        tree = random_well_formed_tree(rnd)
        action = _random_action(rnd, tree)
        if action is None:
            continue
        if action.kind == REPLACE_VALUE and tree.resolve_key_path(action.path).kind is Kind.PROPERTY_NAME:
            continue
        try:
            edits = compile_action(tree, action)
        except (PathError, KindError):
            continue
        after = apply_edits(tree.text, edits)
        reparsed = parse(after)
        assert reparsed.is_well_formed, (tree.text, action, after)


@pytest.mark.parametrize("seed", range(3))
def test_delete_then_reinsert_restores_bytes(seed):
    rnd = random.Random(seed + 100)
    for _ in range(100):
        tree = random_well_formed_tree(rnd)
        nodes = [n for n in tree.walk() if tree.key_path_of(n).steps]
        if not nodes:
            continue
        node = rnd.choice(nodes)
        path = tree.key_path_of(node)
        try:
            edits = compile_action(tree, EditAction(DELETE_NODE, path))
        except (PathError, KindError):
            continue
        after, inverse = apply_edits_with_inverse(tree.text, edits)
        assert apply_edits(after, inverse) == tree.text


def test_move_twice_is_identity_on_value_tree():
    rnd = random.Random(3)
    for _ in range(100):
        tree = random_well_formed_tree(rnd)
        arrays = [
            n for n in tree.walk() if n.kind is Kind.ARRAY and len(tree.elements(n)) >= 2
        ]
        if not arrays:
            continue
        array = rnd.choice(arrays)
        base = tree.key_path_of(array)
        i = rnd.randrange(len(tree.elements(array)) - 1)
        path = KeyPath(base.steps + (Index(i),))
        once = apply_edits(tree.text, compile_action(tree, EditAction(MOVE_SIBLING, path, direction=1)))
        t2 = parse(once)
        back = apply_edits(once, compile_action(t2, EditAction(MOVE_SIBLING, path, direction=1)))
        # moving the element at i+1 down ... undo by moving i+1 up
        t3 = parse(
            apply_edits(
                once,
                compile_action(
                    t2, EditAction(MOVE_SIBLING, KeyPath(base.steps + (Index(i + 1),)), direction=-1)
                ),
            )
        )
        assert t3.to_value() == tree.to_value()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32))
def test_validity_preserving_insertions(seed):
    # inserting a synthesized value for the schema at the target path adds no
    # new diagnostics at or under that path
    from jsonlens.schema import infer_schema_set, load_schema, synthesize_minimal, validate

    produce = load_schema(open("fixtures/produce.schema.json").read())
    rnd = random.Random(seed)
    text = '{"kind": "fruit"}'
    tree = parse(text)
    assert validate(tree, produce) == []
    candidates = ["name", "price", "organic", "tags", "origin"]
    name = rnd.choice(candidates)
    entries = infer_schema_set(produce, KeyPath.of(name))
    value = synthesize_minimal(produce, entries.entries[0]).value
    out = apply_edits(text, compile_action(tree, EditAction(INSERT_PROPERTY, KeyPath(), name=name, value=value)))
    after = parse(out)
    assert after.is_well_formed
    diags = validate(after, produce)
    assert [d for d in diags if d.key_path.steps and d.key_path.steps[0] == Key(name)] == []
