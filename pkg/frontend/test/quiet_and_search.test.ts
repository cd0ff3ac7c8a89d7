// Quiet-mode decorations and the search panel, against the real engine.

import { afterEach, beforeEach, describe, expect, it } from "vitest";
import { byteSlice } from "../src/bytes.js";
import { computeDecorations } from "../src/decorations.js";
import { RpcClient } from "../src/protocol.js";
import { SearchPanel } from "../src/search.js";
import { DocumentSession } from "../src/session.js";
import { StdioTransport } from "./stdio.js";

let transport: StdioTransport;
let client: RpcClient;
let docCounter = 0;

beforeEach(() => {
  transport = new StdioTransport();
  client = new RpcClient(transport);
});

afterEach(() => {
  client.close();
});

function newSession(): DocumentSession {
  return new DocumentSession(client, `qs-${process.pid}-${docCounter++}`);
}

const QUIET_MANIFEST = {
  views: [
    {
      id: "quiet",
      placement: "inline-background",
      query: { syntaxNode: ["PropertyName", "String"] },
      widget: { kind: "quietQuote" },
    },
  ],
};

describe("quiet mode", () => {
  it("hides exactly the quote bytes without touching the buffer", async () => {
    const session = newSession();
    const text = '{"a": "b"}';
    await session.open(text, { viewManifest: QUIET_MANIFEST });
    const anchors = await session.anchors();
    const decor = computeDecorations(anchors.anchors, anchors.status, null, new Set(["quiet"]));
    expect(session.text).toBe(text); // buffer bytes unchanged
    const hidden = decor.hiddenBytes.map((b) => byteSlice(session.text, b, b + 1));
    expect(hidden.every((ch) => ch === '"')).toBe(true);
    expect(decor.hiddenBytes).toEqual([1, 3, 6, 8]); // both quote pairs
    expect(decor.banner).toBe(false);
  });

  it("caret entry restores plain text for that region", async () => {
    const session = newSession();
    await session.open('{"a": "b"}', { viewManifest: QUIET_MANIFEST });
    const anchors = await session.anchors();
    const caretInsideName = 2;
    const decor = computeDecorations(anchors.anchors, anchors.status, caretInsideName, new Set(["quiet"]));
    expect(decor.hiddenBytes).toEqual([6, 8]); // only the string keeps hiding
  });

  it("views deactivated hides all widgets and shows the banner", async () => {
    const session = newSession();
    await session.open("}{", { viewManifest: QUIET_MANIFEST });
    const anchors = await session.anchors();
    expect(anchors.status.viewsDeactivated).toBe(true);
    const decor = computeDecorations(anchors.anchors, anchors.status, null, new Set(["quiet"]));
    expect(decor.banner).toBe(true);
    expect(decor.hiddenBytes).toEqual([]);
    expect(decor.overlays).toEqual([]);
  });

  it("replace anchors become overlays that yield to the caret", async () => {
    const session = newSession();
    const text = '{"xs": [1,2,3,4,5,6,7,8]}';
    await session.open(text);
    const anchors = await session.anchors();
    const decor = computeDecorations(anchors.anchors, anchors.status, null, new Set());
    expect(decor.overlays).toHaveLength(1);
    expect(decor.overlays[0]!.label).toContain("mean 4.5");
    const inside = computeDecorations(anchors.anchors, anchors.status, 10, new Set());
    expect(inside.overlays).toHaveLength(0);
  });
});

describe("search panel", () => {
  it("accept splices the snippet; dismiss leaves the buffer alone", async () => {
    const session = newSession();
    await session.open("{}", { schemaRef: "fixtures/chart.schema.json" });
    const panel = new SearchPanel(session);
    const hits = await panel.run("cividis");
    expect(hits.length).toBeGreaterThan(0);
    const config = hits.find((h) => h.matchedPath[0] === "config")!;
    const other = hits.find((h) => h !== config)!;
    panel.dismiss(other);
    expect(panel.suggestions).not.toContain(other);
    expect(session.text).toBe("{}");
    const result = await panel.accept(config);
    expect(result.version).toBe(2);
    expect(JSON.parse(session.text)).toEqual({
      config: { range: { heatmap: { scheme: "cividis" } } },
    });
  });

  it("accepted insertions arrive flagged as pending suggestions", async () => {
    const session = newSession();
    await session.open("{}", { schemaRef: "fixtures/chart.schema.json" });
    const panel = new SearchPanel(session);
    const hits = await panel.run("cividis");
    await panel.accept(hits[0]!);
    const anchors = await session.anchors();
    expect(anchors.anchors.some((a) => a.payload.suggestionFlag)).toBe(true);
  });

  it("multiple accepts compose, each against the fresh version", async () => {
    const session = newSession();
    await session.open("{}", { schemaRef: "fixtures/chart.schema.json" });
    const panel = new SearchPanel(session);
    await panel.run("cividis");
    const first = panel.suggestions.find((h) => h.matchedPath[0] === "config")!;
    await panel.accept(first); // re-runs the query against version 2
    const second = panel.suggestions.find((h) => h.matchedPath[0] === "encoding");
    expect(second).toBeDefined();
    await panel.accept(second!);
    const value = JSON.parse(session.text);
    expect(value.config.range.heatmap.scheme).toBe("cividis");
    expect(value.encoding).toBeDefined();
    expect(session.version).toBe(3);
  });
});

describe("tracery round trip", () => {
  it("output edit propagates into the grammar document", async () => {
    const session = newSession();
    await session.open('{"origin": ["I feel #mood#"], "mood": ["happy"]}', {
      schemaRef: "fixtures/tracery.schema.json",
    });
    const expansion = await session.traceryExpand(7);
    expect(expansion.output).toBe("I feel happy");
    const reverse = await session.traceryReverseEdit(expansion.traceId, "I feel calm");
    expect(reverse.status).toBe("applied");
    expect(reverse.grammarEdit).toEqual({ symbol: "mood", ruleIndex: 0, newRule: "calm" });
    await session.update(reverse.edits!);
    const again = await session.traceryExpand(7);
    expect(again.output).toBe("I feel calm");
  });

  it("out-of-sync edits leave the grammar untouched and carry a reason", async () => {
    const session = newSession();
    const text = '{"origin": ["#x# and #x#"], "x": ["a"]}';
    await session.open(text, { schemaRef: "fixtures/tracery.schema.json" });
    const expansion = await session.traceryExpand(5);
    expect(expansion.output).toBe("a and a");
    const reverse = await session.traceryReverseEdit(expansion.traceId, "b and a");
    expect(reverse.status).toBe("outOfSync");
    expect(reverse.reason).toBe("ambiguousRuleUse");
    expect(session.text).toBe(text);
  });
});
