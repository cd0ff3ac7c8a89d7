import type { MenuWire } from "./protocol.js";
import type { DocumentSession } from "./session.js";

export type MenuPlacementMode =
  | { mode: "tooltipAtCaret" }
  | { mode: "docked" }
  | { mode: "floating"; x: number; y: number };

/**
 * Fetches and filters the structure-editor menu. Exactly one placement
 * mode is active; floating coordinates persist for the session.
 */
export class MenuController {
  private placementMode: MenuPlacementMode = { mode: "tooltipAtCaret" };
  current: MenuWire | null = null;

  constructor(private readonly session: DocumentSession) {}

  get placement(): MenuPlacementMode {
    return this.placementMode;
  }

  setPlacement(mode: MenuPlacementMode): void {
    this.placementMode = mode;
  }

  /** Fetch the menu at the caret; typing re-fetches with the query. */
  async show(offset: number, query?: string): Promise<MenuWire> {
    this.current = await this.session.menu(offset, query);
    return this.current;
  }

  /** Activate an item; the buffer updates from the server's response. */
  async activate(actionRef: string) {
    const result = await this.session.applyAction(actionRef);
    this.current = null;
    return result;
  }
}
