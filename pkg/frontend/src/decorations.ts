// Pure decoration model: given the buffer, the served anchors, and the
// caret, compute what the code pane should hide or overlay. The buffer
// text itself is never modified here.

import type { AnchorWire, DocStatus } from "./protocol.js";

export interface QuietSpan {
  /** byte offsets of the quote characters to hide */
  hiddenBytes: number[];
}

export interface ReplaceOverlay {
  start: number;
  end: number;
  viewId: string;
  label: string;
}

export interface DecorationSet {
  hiddenBytes: number[];
  overlays: ReplaceOverlay[];
  banner: boolean;
}

const QUIET_KINDS = new Set(["PropertyName", "String"]);

function caretInside(anchor: AnchorWire, caret: number | null): boolean {
  return caret !== null && anchor.range.start <= caret && caret <= anchor.range.end;
}

/**
 * Quiet mode hides the surrounding double quotes of names and strings;
 * replace views swap a range for a widget overlay. Either decoration
 * yields to the caret so the region becomes plain text while editing.
 * When views are deactivated, nothing decorates and a banner shows.
 */
export function computeDecorations(
  anchors: AnchorWire[],
  status: DocStatus,
  caret: number | null,
  quietViewIds: ReadonlySet<string>,
): DecorationSet {
  if (status.viewsDeactivated) {
    return { hiddenBytes: [], overlays: [], banner: true };
  }
  const hiddenBytes: number[] = [];
  const overlays: ReplaceOverlay[] = [];
  for (const anchor of anchors) {
    if (caretInside(anchor, caret)) continue;
    if (quietViewIds.has(anchor.viewId) && QUIET_KINDS.has(anchor.payload.nodeKind)) {
      const text = anchor.payload.nodeText;
      if (text.startsWith('"')) hiddenBytes.push(anchor.range.start);
      if (text.endsWith('"') && anchor.range.end - anchor.range.start >= 2) {
        hiddenBytes.push(anchor.range.end - 1);
      }
    }
    if (anchor.placement === "replace") {
      const label =
        anchor.viewId === "builtin.spark-summary"
          ? sparkLabel(anchor)
          : anchor.payload.nodeKind;
      overlays.push({ start: anchor.range.start, end: anchor.range.end, viewId: anchor.viewId, label });
    }
  }
  hiddenBytes.sort((a, b) => a - b);
  return { hiddenBytes, overlays, banner: false };
}

function sparkLabel(anchor: AnchorWire): string {
  const p = anchor.payload.widgetParams ?? {};
  return `⌁ min ${p["min"]} · mean ${p["mean"]} · max ${p["max"]}`;
}
