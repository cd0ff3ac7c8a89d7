// DOM glue: a textarea code pane plus an anchor rail, the menu panel and
// the search box, all driven by the session. Rendering is deliberately
// plain; the interesting logic lives in the transport-independent modules.

import { byteToCharIndex, charToByteIndex } from "./bytes.js";
import { computeDecorations } from "./decorations.js";
import { MenuController } from "./menu.js";
import type { AnchorsResult, Diagnostic } from "./protocol.js";
import { SearchPanel } from "./search.js";
import type { DocumentSession } from "./session.js";
import { bindAnchors, WidgetBinding } from "./widgets.js";

const QUIET_IDS = new Set(["quiet", "quiet-quotes"]);

export class EditorView {
  private pane: HTMLTextAreaElement;
  private rail: HTMLElement;
  private menuBox: HTMLElement;
  private banner: HTMLElement;
  private diagBox: HTMLElement;
  readonly menu: MenuController;
  readonly search: SearchPanel;

  constructor(
    root: HTMLElement,
    private readonly session: DocumentSession,
  ) {
    root.innerHTML = `
      <div class="toolbar">
        <input class="search" placeholder="search schema (e.g. cividis)" />
        <select class="placement">
          <option value="tooltipAtCaret">menu: at caret</option>
          <option value="docked">menu: docked</option>
          <option value="floating">menu: floating</option>
        </select>
      </div>
      <div class="banner" hidden>views deactivated: the document has an unresolvable parse error</div>
      <div class="main">
        <textarea class="pane" spellcheck="false"></textarea>
        <div class="rail"></div>
      </div>
      <div class="menu" hidden></div>
      <div class="diagnostics"></div>`;
    this.pane = root.querySelector(".pane") as HTMLTextAreaElement;
    this.rail = root.querySelector(".rail") as HTMLElement;
    this.menuBox = root.querySelector(".menu") as HTMLElement;
    this.banner = root.querySelector(".banner") as HTMLElement;
    this.diagBox = root.querySelector(".diagnostics") as HTMLElement;
    this.menu = new MenuController(session);
    this.search = new SearchPanel(session);

    this.pane.addEventListener("click", () => void this.refreshMenu());
    this.pane.addEventListener("keyup", (event) => {
      if (!["ArrowLeft", "ArrowRight", "ArrowUp", "ArrowDown"].includes(event.key)) return;
      void this.refreshMenu();
    });
    const searchBox = root.querySelector(".search") as HTMLInputElement;
    searchBox.addEventListener("change", () => void this.runSearch(searchBox.value));
    const placement = root.querySelector(".placement") as HTMLSelectElement;
    placement.addEventListener("change", () => {
      const mode = placement.value;
      this.menu.setPlacement(
        mode === "floating" ? { mode, x: 120, y: 120 } : ({ mode } as { mode: "docked" | "tooltipAtCaret" }),
      );
    });
  }

  caretByteOffset(): number {
    return charToByteIndex(this.pane.value, this.pane.selectionStart ?? 0);
  }

  async refresh(): Promise<void> {
    this.pane.value = this.session.text;
    const anchors = await this.session.anchors();
    this.renderRail(anchors);
  }

  private renderRail(result: AnchorsResult): void {
    const decor = computeDecorations(result.anchors, result.status, this.caretByteOffset(), QUIET_IDS);
    this.banner.hidden = !decor.banner;
    this.rail.replaceChildren();
    if (decor.banner) return;
    for (const item of bindAnchors(this.session, result.anchors)) {
      const row = this.widgetRow(item);
      if (row) this.rail.appendChild(row);
    }
  }

  private widgetRow(item: WidgetBinding): HTMLElement | null {
    const row = document.createElement("div");
    row.className = "widget";
    switch (item.kind) {
      case "booleanToggle": {
        const box = document.createElement("input");
        box.type = "checkbox";
        box.checked = item.binding.value;
        box.addEventListener("change", () => void item.binding.toggle().then(() => this.refresh()));
        row.append(box, ` ${item.binding.anchor.payload.nodeText}`);
        return row;
      }
      case "numberSlider": {
        const { min, max, step, value } = item.binding.bounds;
        const slider = document.createElement("input");
        slider.type = "range";
        slider.min = String(min);
        slider.max = String(max);
        slider.step = String(step);
        slider.value = String(value);
        slider.addEventListener("change", () =>
          void item.binding.set(Number(slider.value)).then(() => this.refresh()),
        );
        row.append(slider, ` ${value}`);
        return row;
      }
      case "picklist": {
        const select = document.createElement("select");
        for (const option of item.binding.options) {
          const el = document.createElement("option");
          el.textContent = String(option);
          el.selected = JSON.stringify(option) === item.binding.anchor.payload.nodeText;
          select.appendChild(el);
        }
        select.addEventListener("change", () =>
          void item.binding.choose(item.binding.options[select.selectedIndex]).then(() => this.refresh()),
        );
        row.appendChild(select);
        return row;
      }
      case "colorPicker": {
        const input = document.createElement("input");
        input.type = "color";
        if (/^#[0-9a-fA-F]{6}$/.test(item.binding.color)) input.value = item.binding.color;
        input.addEventListener("change", () => void item.binding.set(input.value).then(() => this.refresh()));
        row.appendChild(input);
        return row;
      }
      case "sparkSummary": {
        row.textContent = item.binding.label;
        return row;
      }
      default: {
        if (item.anchor.placement === "menu") return null;
        row.textContent = `${item.anchor.viewId}: ${JSON.stringify(item.anchor.payload.widgetParams ?? {})}`;
        return row;
      }
    }
  }

  private async refreshMenu(): Promise<void> {
    const menu = await this.menu.show(this.caretByteOffset());
    this.menuBox.hidden = menu.items.length === 0;
    this.menuBox.replaceChildren();
    this.menuBox.dataset["placement"] = this.menu.placement.mode;
    for (const info of menu.typeInfo) {
      const line = document.createElement("div");
      line.className = "type-info";
      line.textContent = info;
      this.menuBox.appendChild(line);
    }
    for (const item of menu.items) {
      const button = document.createElement("button");
      button.textContent = item.detail ? `${item.label} — ${item.detail}` : item.label;
      button.disabled = !item.actionRef;
      if (item.actionRef) {
        const ref = item.actionRef;
        button.addEventListener("click", () => void this.menu.activate(ref).then(() => this.refresh()));
      }
      this.menuBox.appendChild(button);
    }
  }

  private async runSearch(query: string): Promise<void> {
    if (!query) return;
    const hits = await this.search.run(query);
    this.diagBox.replaceChildren();
    for (const hit of hits) {
      const row = document.createElement("div");
      row.className = "suggestion";
      row.textContent = `${hit.matchedPath.join(".")} → ${JSON.stringify(hit.snippet)} `;
      const accept = document.createElement("button");
      accept.textContent = "accept";
      accept.addEventListener("click", () => void this.search.accept(hit).then(() => this.refresh()));
      const dismiss = document.createElement("button");
      dismiss.textContent = "dismiss";
      dismiss.addEventListener("click", () => {
        this.search.dismiss(hit);
        row.remove();
      });
      row.append(accept, dismiss);
      this.diagBox.appendChild(row);
    }
  }

  showDiagnostics(diags: Diagnostic[]): void {
    this.diagBox.replaceChildren();
    for (const diag of diags) {
      const row = document.createElement("div");
      row.className = `diag ${diag.severity}`;
      row.textContent = `${diag.severity}: ${diag.message}`;
      this.diagBox.appendChild(row);
    }
  }
}
