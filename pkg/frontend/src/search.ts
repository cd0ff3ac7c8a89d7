import type { SuggestionWire, UpdateResult } from "./protocol.js";
import type { DocumentSession } from "./session.js";

/**
 * In-place schema search: accepted suggestions splice their precompiled
 * edits through doc/update (marked as suggestions so the served anchors
 * carry the pending flag); dismissing only drops the list entry. After an
 * accept the remaining suggestions are recomputed against the new version.
 */
export class SearchPanel {
  suggestions: SuggestionWire[] = [];
  lastQuery = "";

  constructor(private readonly session: DocumentSession) {}

  async run(query: string, limit = 10): Promise<SuggestionWire[]> {
    this.lastQuery = query;
    const result = await this.session.search(query, limit);
    this.suggestions = result.suggestions;
    return this.suggestions;
  }

  async accept(suggestion: SuggestionWire): Promise<UpdateResult> {
    const result = await this.session.update(suggestion.edits, true);
    if (this.lastQuery) await this.run(this.lastQuery);
    return result;
  }

  dismiss(suggestion: SuggestionWire): void {
    this.suggestions = this.suggestions.filter((s) => s !== suggestion);
  }
}
