import type { Transport } from "./protocol.js";

/** Browser transport speaking newline-free JSON-RPC frames over WebSocket. */
export class WebSocketTransport implements Transport {
  private handler: ((line: string) => void) | null = null;
  private queue: string[] = [];
  private open = false;

  constructor(private readonly socket: WebSocket) {
    socket.addEventListener("open", () => {
      this.open = true;
      for (const line of this.queue) socket.send(line);
      this.queue = [];
    });
    socket.addEventListener("message", (event) => {
      if (typeof event.data === "string" && this.handler) this.handler(event.data);
    });
  }

  static connect(url: string): WebSocketTransport {
    return new WebSocketTransport(new WebSocket(url));
  }

  send(line: string): void {
    if (this.open) this.socket.send(line);
    else this.queue.push(line);
  }

  onLine(handler: (line: string) => void): void {
    this.handler = handler;
  }

  close(): void {
    this.socket.close();
  }
}
