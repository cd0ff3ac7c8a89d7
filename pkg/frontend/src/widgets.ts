// Widget bindings: each served anchor becomes a small view-model whose
// interactions produce edits. Bindings never touch the buffer directly;
// every mutation goes through doc/update or doc/applyAction.

import type { AnchorWire, WireTextEdit } from "./protocol.js";
import type { DocumentSession } from "./session.js";

function literalEdit(anchor: AnchorWire, value: unknown): WireTextEdit {
  return {
    start: anchor.range.start,
    end: anchor.range.end,
    startPos: anchor.range.startPos,
    endPos: anchor.range.endPos,
    newText: JSON.stringify(value),
  };
}

export class BooleanToggleBinding {
  constructor(
    private readonly session: DocumentSession,
    readonly anchor: AnchorWire,
    private readonly atVersion: number,
  ) {}

  get value(): boolean {
    return Boolean(this.anchor.payload.widgetParams?.["value"]);
  }

  async toggle() {
    return this.session.update([literalEdit(this.anchor, !this.value)], false, this.atVersion);
  }
}

export class NumberSliderBinding {
  constructor(
    private readonly session: DocumentSession,
    readonly anchor: AnchorWire,
    private readonly atVersion: number,
  ) {}

  get bounds(): { min: number; max: number; step: number; value: number } {
    const params = this.anchor.payload.widgetParams ?? {};
    return {
      min: Number(params["min"] ?? 0),
      max: Number(params["max"] ?? 100),
      step: Number(params["step"] ?? 1),
      value: Number(params["value"] ?? 0),
    };
  }

  async set(value: number) {
    return this.session.update([literalEdit(this.anchor, value)], false, this.atVersion);
  }
}

export class PicklistBinding {
  constructor(
    private readonly session: DocumentSession,
    readonly anchor: AnchorWire,
    private readonly atVersion: number,
  ) {}

  get options(): unknown[] {
    const params = this.anchor.payload.widgetParams ?? {};
    return Array.isArray(params["options"]) ? (params["options"] as unknown[]) : [];
  }

  async choose(option: unknown) {
    return this.session.update([literalEdit(this.anchor, option)], false, this.atVersion);
  }
}

export class ColorPickerBinding {
  constructor(
    private readonly session: DocumentSession,
    readonly anchor: AnchorWire,
    private readonly atVersion: number,
  ) {}

  get color(): string {
    return String(this.anchor.payload.widgetParams?.["color"] ?? "");
  }

  async set(hex: string) {
    return this.session.update([literalEdit(this.anchor, hex)], false, this.atVersion);
  }
}

/** Display-only summary shown in place of a long numeric array. */
export class SparkSummaryBinding {
  constructor(readonly anchor: AnchorWire) {}

  get stats(): { min: number; mean: number; max: number; count: number } {
    const params = this.anchor.payload.widgetParams ?? {};
    return {
      min: Number(params["min"] ?? 0),
      mean: Number(params["mean"] ?? 0),
      max: Number(params["max"] ?? 0),
      count: Number(params["count"] ?? 0),
    };
  }

  get label(): string {
    const { min, mean, max, count } = this.stats;
    return `${count} values: min ${min} · mean ${mean} · max ${max}`;
  }
}

export type WidgetBinding =
  | { kind: "booleanToggle"; binding: BooleanToggleBinding }
  | { kind: "numberSlider"; binding: NumberSliderBinding }
  | { kind: "picklist"; binding: PicklistBinding }
  | { kind: "colorPicker"; binding: ColorPickerBinding }
  | { kind: "sparkSummary"; binding: SparkSummaryBinding }
  | { kind: "other"; anchor: AnchorWire };

const WIDGET_OF_VIEW: Record<string, WidgetBinding["kind"]> = {
  "builtin.boolean-toggle": "booleanToggle",
  "builtin.number-slider": "numberSlider",
  "builtin.picklist": "picklist",
  "builtin.color-picker": "colorPicker",
  "builtin.spark-summary": "sparkSummary",
};

export function bindAnchors(
  session: DocumentSession,
  anchors: AnchorWire[],
  atVersion?: number,
): WidgetBinding[] {
  const version = atVersion ?? session.version;
  return anchors.map((anchor) => {
    switch (WIDGET_OF_VIEW[anchor.viewId]) {
      case "booleanToggle":
        return { kind: "booleanToggle", binding: new BooleanToggleBinding(session, anchor, version) };
      case "numberSlider":
        return { kind: "numberSlider", binding: new NumberSliderBinding(session, anchor, version) };
      case "picklist":
        return { kind: "picklist", binding: new PicklistBinding(session, anchor, version) };
      case "colorPicker":
        return { kind: "colorPicker", binding: new ColorPickerBinding(session, anchor, version) };
      case "sparkSummary":
        return { kind: "sparkSummary", binding: new SparkSummaryBinding(anchor) };
      default:
        // unknown kinds render as a labelled fallback chip of the payload
        return { kind: "other", anchor };
    }
  });
}
