#!/usr/bin/env python3
"""Record the 50-request service transcript used by the replay check.

Builds a deterministic request sequence covering every method, runs it
against a fresh engine, and writes requests.jsonl + responses.jsonl under
fixtures/transcript/. The acceptance suite replays the requests on a new
engine and requires byte-identical responses, so regenerate this fixture
(and commit it) whenever the wire format intentionally changes.
"""

from __future__ import annotations

import json
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "fixtures" / "transcript"


def build_requests() -> list[dict]:
    produce_doc = '{\n  "kind": "fruit",\n  "price": 3\n}'
    chart_doc = '{"mark": "bar", "encoding": {"x": {"field": "a", "type": "nominal"}}}'
    grammar_doc = '{"origin": ["I feel #mood#"], "mood": ["happy", "sad"]}'
    requests: list[dict] = []

    def add(method: str, **params) -> None:
        requests.append(
            {"jsonrpc": "2.0", "id": len(requests) + 1, "method": method, "params": params}
        )

    add("doc/open", docId="produce", text=produce_doc, schemaRef="produce.schema.json")
    add("doc/open", docId="chart", text=chart_doc, schemaRef="chart.schema.json")
    add("doc/open", docId="grammar", text=grammar_doc, schemaRef="tracery.schema.json")
    add("doc/open", docId="plain", text='{"flag": true, "xs": [1,2,3,4,5,6,7,8]}')
    add("doc/open", docId="broken", text="}{")

    for offset in (0, 1, 5, 12, 20, 28):
        add("doc/menu", docId="produce", offset=offset)
    for offset in (1, 9, 40, 55):
        add("doc/menu", docId="chart", offset=offset)
    add("doc/menu", docId="chart", offset=55, query="nom")
    add("doc/menu", docId="broken", offset=1)

    add("doc/anchors", docId="produce")
    add("doc/anchors", docId="chart")
    add("doc/anchors", docId="plain")
    add("doc/anchors", docId="broken")

    for query in ("cividis", "scheme", "grid", "expression", "zzz-no-match"):
        add("schema/search", docId="chart", query=query, limit=5)
    add("schema/search", docId="produce", query="price", limit=3)
    add("schema/search", docId="produce", query="origin", limit=3)

    add("doc/update", docId="produce", baseVersion=1,
        edits=[{"start": 28, "end": 29, "newText": "4"}])
    add("doc/anchors", docId="produce")
    add("doc/update", docId="produce", baseVersion=2, edits=[])
    add("doc/menu", docId="produce", offset=12)

    for seed in (1, 7, 42, 1234):
        add("tracery/expand", docId="grammar", seed=seed)
    add("tracery/expand", docId="grammar", seed=7)
    add("tracery/reverseEdit", docId="grammar", traceId="t1-5", editedOutput="I feel curious")
    add("tracery/reverseEdit", docId="grammar", traceId="t1-5", editedOutput="I feel")
    add("tracery/reverseEdit", docId="grammar", traceId="missing", editedOutput="x")

    add("doc/update", docId="chart", baseVersion=1,
        edits=[{"start": 0, "end": 0, "newText": " "}])
    add("doc/anchors", docId="chart")
    add("doc/menu", docId="chart", offset=56)
    add("schema/search", docId="chart", query="opacity", limit=4)

    # error paths must replay identically too
    add("doc/open", docId="produce", text="{}")
    add("doc/update", docId="produce", baseVersion=99, edits=[])
    add("doc/applyAction", docId="produce", baseVersion=3, actionRef="a3-999")
    add("doc/menu", docId="nosuchdoc", offset=0)
    add("nosuch/method")
    add("doc/menu", docId="produce", offset="wrong-type")
    add("doc/anchors", docId="produce")
    add("doc/menu", docId="produce", offset=3)

    return requests


def main() -> None:
    import sys

    sys.path.insert(0, str(ROOT / "src"))
    from jsonlens.service import Engine

    requests = build_requests()
    assert len(requests) >= 50, f"want >= 50 requests, have {len(requests)}"
    engine = Engine(schema_base=ROOT / "fixtures")
    responses = [engine.handle_line(json.dumps(r)) for r in requests]
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "requests.jsonl").write_text(
        "".join(json.dumps(r) + "\n" for r in requests), encoding="utf-8"
    )
    (OUT / "responses.jsonl").write_text(
        "".join(r + "\n" for r in responses if r is not None), encoding="utf-8"
    )
    print(f"recorded {len(requests)} requests -> {OUT}")


if __name__ == "__main__":
    main()
