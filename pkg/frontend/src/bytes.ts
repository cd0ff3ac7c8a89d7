// Edit ranges are byte offsets into the UTF-8 text, so splicing must go
// through encoded bytes; JS string indices would drift on multi-byte input.

import type { WireTextEdit } from "./protocol.js";

const encoder = new TextEncoder();
const decoder = new TextDecoder();

export function byteLength(text: string): number {
  return encoder.encode(text).length;
}

/** Apply non-overlapping byte-range edits atomically. */
export function applyEdits(text: string, edits: readonly WireTextEdit[]): string {
  const data = encoder.encode(text);
  const ordered = [...edits].sort((a, b) => a.start - b.start || a.end - b.end);
  let prevEnd = -1;
  for (const edit of ordered) {
    if (edit.start < 0 || edit.end > data.length || edit.start > edit.end) {
      throw new Error(`edit [${edit.start},${edit.end}) outside document`);
    }
    if (edit.start < prevEnd) throw new Error("overlapping edits");
    prevEnd = edit.end;
  }
  const parts: Uint8Array[] = [];
  let cursor = 0;
  for (const edit of ordered) {
    parts.push(data.subarray(cursor, edit.start));
    parts.push(encoder.encode(edit.newText));
    cursor = edit.end;
  }
  parts.push(data.subarray(cursor));
  const total = parts.reduce((n, p) => n + p.length, 0);
  const out = new Uint8Array(total);
  let at = 0;
  for (const part of parts) {
    out.set(part, at);
    at += part.length;
  }
  return decoder.decode(out);
}

/** Byte slice of a string by byte offsets. */
export function byteSlice(text: string, start: number, end: number): string {
  return decoder.decode(encoder.encode(text).subarray(start, end));
}

/** Convert a byte offset to a JS string (UTF-16 code unit) index. */
export function byteToCharIndex(text: string, byteOffset: number): number {
  let bytes = 0;
  let units = 0;
  for (const ch of text) {
    // iterate code points so astral characters count 4 bytes, 2 units
    if (bytes >= byteOffset) return units;
    bytes += encoder.encode(ch).length;
    units += ch.length;
  }
  return text.length;
}

/** Convert a JS string index to a byte offset. */
export function charToByteIndex(text: string, charIndex: number): number {
  return byteLength(text.slice(0, charIndex));
}
