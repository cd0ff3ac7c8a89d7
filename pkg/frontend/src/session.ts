import {
  AnchorsResult,
  ApplyResult,
  ExpandResult,
  MenuWire,
  OpenResult,
  ReverseEditResult,
  RpcClient,
  SearchResult,
  UpdateResult,
  WireTextEdit,
} from "./protocol.js";
import { applyEdits } from "./bytes.js";

export interface SessionOptions {
  schemaRef?: string | { inline: unknown };
  viewManifest?: { remove?: string[]; views?: unknown[] };
}

/**
 * One open document mirrored from the service. The local buffer is only
 * ever changed by server-confirmed updates, and responses computed
 * against an older version than the buffer already shows are discarded.
 */
export class DocumentSession {
  version = 0;
  text = "";
  private appliedVersion = 0;

  constructor(
    private readonly client: RpcClient,
    readonly docId: string,
  ) {}

  async open(text: string, options: SessionOptions = {}): Promise<OpenResult> {
    const result = await this.client.request<OpenResult>("doc/open", {
      docId: this.docId,
      text,
      schemaRef: options.schemaRef ?? null,
      viewManifest: options.viewManifest ?? null,
    });
    this.text = text;
    this.version = result.version;
    this.appliedVersion = result.version;
    return result;
  }

  /** Push edits; the buffer changes only after the server confirms.
   * Pass the version the edits were computed against so the server can
   * reject them once the document has moved on. */
  async update(edits: WireTextEdit[], suggestion = false, baseVersion?: number): Promise<UpdateResult> {
    const base = baseVersion ?? this.version;
    const textAtSend = this.text;
    const result = await this.client.request<UpdateResult>("doc/update", {
      docId: this.docId,
      baseVersion: base,
      edits,
      suggestion,
    });
    this.commit(result.version, applyEdits(textAtSend, edits));
    return result;
  }

  async menu(offset: number, query?: string): Promise<MenuWire> {
    return this.client.request<MenuWire>("doc/menu", {
      docId: this.docId,
      offset,
      query: query ?? null,
    });
  }

  /** Activate a served menu item; the server compiles and applies the edits. */
  async applyAction(actionRef: string): Promise<ApplyResult> {
    const result = await this.client.request<ApplyResult>("doc/applyAction", {
      docId: this.docId,
      baseVersion: this.version,
      actionRef,
    });
    this.commit(result.version, applyEdits(this.text, result.edits));
    return result;
  }

  async anchors(): Promise<AnchorsResult> {
    return this.client.request<AnchorsResult>("doc/anchors", { docId: this.docId });
  }

  async search(query: string, limit = 10): Promise<SearchResult> {
    return this.client.request<SearchResult>("schema/search", {
      docId: this.docId,
      query,
      limit,
    });
  }

  async traceryExpand(seed: number): Promise<ExpandResult> {
    return this.client.request<ExpandResult>("tracery/expand", { docId: this.docId, seed });
  }

  async traceryReverseEdit(traceId: string, editedOutput: string): Promise<ReverseEditResult> {
    return this.client.request<ReverseEditResult>("tracery/reverseEdit", {
      docId: this.docId,
      traceId,
      editedOutput,
    });
  }

  private commit(version: number, text: string): void {
    if (version <= this.appliedVersion) return; // stale response, discard
    this.appliedVersion = version;
    this.version = version;
    this.text = text;
  }
}
