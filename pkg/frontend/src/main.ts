import { EditorView } from "./editor.js";
import { RpcClient } from "./protocol.js";
import { DocumentSession } from "./session.js";
import { WebSocketTransport } from "./transport.js";

const SAMPLE = `{
  "kind": "fruit",
  "price": 3,
  "organic": true
}`;

async function boot(): Promise<void> {
  const url = `ws://${location.host}/rpc`;
  const client = new RpcClient(WebSocketTransport.connect(url));
  const session = new DocumentSession(client, `doc-${Date.now()}`);
  const opened = await session.open(SAMPLE, { schemaRef: "fixtures/produce.schema.json" });
  const root = document.getElementById("editor");
  if (!root) throw new Error("missing #editor element");
  const view = new EditorView(root, session);
  view.showDiagnostics(opened.diagnostics);
  await view.refresh();
}

window.addEventListener("load", () => {
  boot().catch((error) => {
    const root = document.getElementById("editor");
    if (root) root.textContent = `failed to connect: ${error}`;
  });
});
