#!/usr/bin/env python3
"""Regenerate the JSONC corpus under fixtures/corpus/.

The corpus mixes hand-picked edge cases with seeded random documents so
the round-trip and recovery suites exercise comments, trailing commas,
unicode, deep nesting, and every recovery path. Deterministic: rerunning
rewrites identical files.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

CORPUS = Path(__file__).resolve().parent.parent / "fixtures" / "corpus"

HANDWRITTEN: list[str] = [
    '{"a": 1}',
    '{"a": 1,}',
    "{}",
    "[]",
    "",
    "   \n\t ",
    "42",
    "-3.25e-4",
    '"just a string"',
    "true",
    "null",
    '{"a": }',
    '{"a": 1,, "b": 2}',
    "[1,,2]",
    "[1, 2, 3,]",
    "}{",
    "{",
    "[",
    '{"unterminated": "str',
    '{"no',
    "{foo: 1}",
    '{"a":1 "b":2}',
    '{"a" 1}',
    '{"a" "b"}',
    "// only a comment",
    "/* block */",
    "/* unterminated",
    '// lead\n{"a": 1} // trail',
    '{ /* inner */ "a": /* mid */ 1 }',
    '{"a": [1, 2, {"b": [true, false, null]}]}',
    '{\n  "name": "deep",\n  "nest": {\n    "list": [\n      {"x": 1},\n      {"y": 2}\n    ]\n  }\n}',
    '{"unicode": "héllo wörld 🌍", "key·odd": "値"}',
    '{"esc": "line\\nbreak \\t tab \\u00e9"}',
    '{"dup": 1, "dup": 2}',
    '[{"a":1},{"a":2},{"a":3},{"a":4},{"a":5},{"a":6},{"a":7},{"a":8}]',
    '{"numbers": [0, -0, 1e10, 2.5E-3, 1234567890123456789]}',
    '{"kind": "fruit", "name": "plum", "price": 1.25, "organic": true}',
    '{"mark": "bar", "encoding": {"x": {"field": "a", "type": "nominal"}}}',
    '{"origin": ["I feel #mood#"], "mood": ["happy", "sad"]}',
    "[[[[[[[[1]]]]]]]]",
    '{"a": {"b": {"c": {"d": {"e": 1}}}}}',
    '  {"padded": true}  ',
    '{"trailing-comment": 1} /* after */',
    '{"a"\n:\n1}',
    "[1 2 3]",
    '{"a": 01}',
    '{"a": +1}',
    '{"a": .5}',
    '{"a": 1.}',
    '{"à": "côté", "emoji": "🎈🎈"}',
    '{"windows": "line\\r\\nending"}',
    '{\r\n  "crlf": true\r\n}',
]


def random_value(rnd: random.Random, depth: int):
    kinds = ["int", "float", "str", "bool", "null"]
    if depth > 0:
        kinds += ["obj", "arr", "obj", "arr"]
    kind = rnd.choice(kinds)
    if kind == "int":
        return rnd.randint(-1000, 1000)
    if kind == "float":
        return round(rnd.uniform(-100, 100), 3)
    if kind == "str":
        alphabet = "abc xyz_012 éü🌀"
        return "".join(rnd.choice(alphabet) for _ in range(rnd.randint(0, 8)))
    if kind == "bool":
        return rnd.random() < 0.5
    if kind == "null":
        return None
    if kind == "obj":
        return {f"k{i}": random_value(rnd, depth - 1) for i in range(rnd.randint(0, 4))}
    return [random_value(rnd, depth - 1) for _ in range(rnd.randint(0, 4))]


def decorate(rnd: random.Random, text: str) -> str:
    """Sprinkle JSONC-isms into pretty-printed JSON."""
    lines = text.splitlines()
    out = []
    for line in lines:
        if rnd.random() < 0.15:
            out.append(line + " // note")
        elif rnd.random() < 0.1:
            out.append(line + " /* mark */")
        else:
            out.append(line)
    body = "\n".join(out)
    if rnd.random() < 0.3:
        body = "// header\n" + body
    if rnd.random() < 0.25:
        body = body.replace("}", ",}", 1) if rnd.random() < 0.5 else body
    return body


def main() -> None:
    CORPUS.mkdir(parents=True, exist_ok=True)
    for stale in CORPUS.glob("*.jsonc"):
        stale.unlink()
    files = list(HANDWRITTEN)
    rnd = random.Random(20240117)
    while len(files) < 64:
        value = random_value(rnd, 3)
        pretty = json.dumps(value, indent=2, ensure_ascii=False)
        files.append(decorate(rnd, pretty))
    for i, text in enumerate(files):
        (CORPUS / f"c{i:03d}.jsonc").write_text(text, encoding="utf-8")
    print(f"wrote {len(files)} corpus files to {CORPUS}")


if __name__ == "__main__":
    main()
