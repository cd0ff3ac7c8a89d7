// Wire types mirroring the engine's JSON-RPC surface, plus a small
// id-correlating client that works over any line-oriented transport.

export interface Position {
  line: number;
  col: number;
}

export interface WireRange {
  start: number; // byte offset into the UTF-8 text
  end: number;
  startPos: Position;
  endPos: Position;
}

export interface WireTextEdit extends WireRange {
  newText: string;
}

export type KeyPathStep = { key: string } | { index: number } | { keyName: string };

export interface Diagnostic {
  source: "parse" | "schema";
  severity: "error" | "warning";
  message: string;
  code?: string;
  rule?: string;
  range?: WireRange;
  keyPath?: KeyPathStep[];
}

export interface DocStatus {
  viewsDeactivated: boolean;
}

export interface OpenResult {
  version: number;
  diagnostics: Diagnostic[];
  status: DocStatus;
}

export interface UpdateResult extends OpenResult {}

export interface MenuItemWire {
  label: string;
  detail: string;
  group: "structural" | "schemaProperty" | "schemaValue" | "typeSwitch" | "view";
  sortKey: string;
  actionRef?: string;
}

export interface MenuWire {
  version: number;
  query: string;
  anchorPath: KeyPathStep[];
  typeInfo: string[];
  items: MenuItemWire[];
}

export interface ApplyResult {
  version: number;
  edits: WireTextEdit[];
  diagnostics: Diagnostic[];
  status: DocStatus;
}

export interface AnchorPayload {
  nodeKind: string;
  nodeText: string;
  schemaNames: string[];
  suggestionFlag: boolean;
  widgetParams?: Record<string, unknown>;
}

export interface AnchorWire {
  viewId: string;
  placement: "inline-prefix" | "inline-suffix" | "inline-background" | "replace" | "menu";
  range: WireRange;
  keyPath: KeyPathStep[];
  payload: AnchorPayload;
}

export interface AnchorsResult {
  version: number;
  anchors: AnchorWire[];
  status: DocStatus;
}

export interface SuggestionWire {
  matchedPath: string[];
  snippet: unknown;
  insertionPath: KeyPathStep[];
  score: { depth: number; path: string[] };
  edits: WireTextEdit[];
}

export interface SearchResult {
  version: number;
  suggestions: SuggestionWire[];
}

export interface ExpandResult {
  version: number;
  traceId: string;
  output: string;
}

export interface ReverseEditResult {
  status: "applied" | "outOfSync";
  reason?: string;
  grammarEdit?: { symbol: string; ruleIndex: number; newRule: string };
  edits?: WireTextEdit[];
}

export interface RpcError {
  code: number;
  message: string;
  data?: { type?: string };
}

interface RpcResponse {
  jsonrpc: "2.0";
  id: number;
  result?: unknown;
  error?: RpcError;
}

export class RpcFailure extends Error {
  constructor(public readonly rpc: RpcError) {
    super(`${rpc.code}: ${rpc.message}`);
  }
}

/** Line transport: the client writes request lines, the transport calls back with response lines. */
export interface Transport {
  send(line: string): void;
  onLine(handler: (line: string) => void): void;
  close(): void;
}

export class RpcClient {
  private nextId = 1;
  private pending = new Map<number, { resolve: (v: unknown) => void; reject: (e: Error) => void }>();

  constructor(private readonly transport: Transport) {
    transport.onLine((line) => this.dispatch(line));
  }

  private dispatch(line: string): void {
    let message: RpcResponse;
    try {
      message = JSON.parse(line) as RpcResponse;
    } catch {
      return; // not a response line; ignore
    }
    const waiter = this.pending.get(message.id);
    if (!waiter) return;
    this.pending.delete(message.id);
    if (message.error) waiter.reject(new RpcFailure(message.error));
    else waiter.resolve(message.result);
  }

  request<T>(method: string, params: Record<string, unknown>): Promise<T> {
    const id = this.nextId++;
    const line = JSON.stringify({ jsonrpc: "2.0", id, method, params });
    return new Promise<T>((resolve, reject) => {
      this.pending.set(id, { resolve: resolve as (v: unknown) => void, reject });
      this.transport.send(line);
    });
  }

  close(): void {
    this.transport.close();
  }
}
