/**
 * Parameter panel: slider groups mirroring the engine attribute groups
 * (Main Body / Head & Tail / one group per leg). Control ranges come
 * from the parameter invariants, e.g. impact phase lives in [0, 8).
 *
 * Edits are range-checked client side before any request, posted as
 * partial documents, and coalesced: one POST in flight at a time, edits
 * during flight collapse to the latest value per control. Displayed
 * values always track the last acknowledged state.
 */

import { ApiClient, ParamsDoc, StateDoc } from "./api.js";

export interface ControlSpec {
  id: string;
  label: string;
  group: string;
  min: number;
  max: number;
  step: number;
  read(params: ParamsDoc): number;
  patch(value: number): Record<string, unknown>;
}

export const LEG_IDS = ["FR", "FL", "BR", "BL"] as const;

const LEG_LABELS: Record<string, string> = {
  FR: "Front Right Leg",
  FL: "Front Left Leg",
  BR: "Back Right Leg",
  BL: "Back Left Leg",
};

export function buildControls(): ControlSpec[] {
  const controls: ControlSpec[] = [
    {
      id: "speed",
      label: "Speed",
      group: "Main Body",
      min: 0.1,
      max: 8,
      step: 0.1,
      read: (p) => p.motion_frequency,
      patch: (v) => ({ motion_frequency: v }),
    },
    {
      id: "high",
      label: "High",
      group: "Main Body",
      min: 0.2,
      max: 2,
      step: 0.01,
      read: (p) => p.body_height,
      patch: (v) => ({ body_height: v }),
    },
    {
      id: "bounce",
      label: "Bounce",
      group: "Main Body",
      min: 0,
      max: 0.3,
      step: 0.005,
      read: (p) => p.bounce,
      patch: (v) => ({ bounce: v }),
    },
    {
      id: "head_high",
      label: "Head High",
      group: "Head & Tail",
      min: -0.3,
      max: 0.3,
      step: 0.01,
      read: (p) => p.head_high,
      patch: (v) => ({ head_high: v }),
    },
    {
      id: "head_pos",
      label: "Head Pos",
      group: "Head & Tail",
      min: -1,
      max: 1,
      step: 0.02,
      read: (p) => p.head_pos,
      patch: (v) => ({ head_pos: v }),
    },
    {
      id: "head_oscillation",
      label: "Head Oscillation",
      group: "Head & Tail",
      min: 0,
      max: 8,
      step: 1,
      read: (p) => p.head_oscillation,
      patch: (v) => ({ head_oscillation: v }),
    },
    {
      id: "tail_swing",
      label: "Tail Swing",
      group: "Head & Tail",
      min: 0,
      max: 8,
      step: 1,
      read: (p) => p.tail_swing,
      patch: (v) => ({ tail_swing: v }),
    },
  ];
  for (const leg of LEG_IDS) {
    controls.push({
      id: `${leg}_impact_phase`,
      label: "Impact Phase",
      group: LEG_LABELS[leg],
      min: 0,
      max: 7.95, // phase lives in [0, 8)
      step: 0.05,
      read: (p) => p.legs[leg].impact_phase,
      patch: (v) => ({ legs: { [leg]: { impact_phase: v } } }),
    });
    controls.push({
      id: `${leg}_impact_duration`,
      label: "Impact Duration",
      group: LEG_LABELS[leg],
      min: 0.05, // duration lives in (0, 8)
      max: 7.95,
      step: 0.05,
      read: (p) => p.legs[leg].impact_duration,
      patch: (v) => ({ legs: { [leg]: { impact_duration: v } } }),
    });
  }
  return controls;
}

export type EditResult = "applied" | "rejected-range" | "rejected-service";

export class ParamPanel {
  readonly root: HTMLElement;
  private controls = buildControls();
  private inputs = new Map<string, HTMLInputElement>();
  private valueLabels = new Map<string, HTMLElement>();
  private errorBox: HTMLElement;
  private acknowledged: StateDoc | null = null;
  private inFlight = false;
  private pending = new Map<string, { spec: ControlSpec; value: number }>();

  /** Fired with every acknowledged state (panel edits only). */
  onstate: (state: StateDoc) => void = () => {};

  constructor(private api: ApiClient, host: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "param-panel";
    this.errorBox = document.createElement("div");
    this.errorBox.className = "panel-error";
    this.errorBox.style.display = "none";
    this.root.appendChild(this.errorBox);

    const groups = new Map<string, HTMLElement>();
    for (const spec of this.controls) {
      let groupBox = groups.get(spec.group);
      if (!groupBox) {
        const section = document.createElement("section");
        section.className = "panel-group";
        const heading = document.createElement("h3");
        heading.textContent = spec.group;
        section.appendChild(heading);
        this.root.appendChild(section);
        groups.set(spec.group, section);
        groupBox = section;
      }
      groupBox.appendChild(this.buildRow(spec));
    }
    host.appendChild(this.root);
  }

  private buildRow(spec: ControlSpec): HTMLElement {
    const row = document.createElement("label");
    row.className = "panel-row";
    const name = document.createElement("span");
    name.textContent = spec.label;
    const slider = document.createElement("input");
    slider.type = "range";
    slider.min = String(spec.min);
    slider.max = String(spec.max);
    slider.step = String(spec.step);
    slider.dataset.control = spec.id;
    const value = document.createElement("span");
    value.className = "panel-value";
    slider.addEventListener("input", () => {
      void this.edit(spec.id, Number(slider.value));
    });
    row.append(name, slider, value);
    this.inputs.set(spec.id, slider);
    this.valueLabels.set(spec.id, value);
    return row;
  }

  /** Render the acknowledged state into every control. */
  display(state: StateDoc): void {
    this.acknowledged = state;
    for (const spec of this.controls) {
      const value = spec.read(state.params);
      const input = this.inputs.get(spec.id)!;
      input.value = String(value);
      this.valueLabels.get(spec.id)!.textContent = value.toFixed(2);
    }
  }

  displayedValue(id: string): number {
    return Number(this.inputs.get(id)!.value);
  }

  /**
   * Apply a user edit. Out-of-range values are rejected before any
   * request; service rejections revert the control and surface the
   * service's message.
   */
  async edit(id: string, value: number): Promise<EditResult> {
    const spec = this.controls.find((c) => c.id === id);
    if (!spec) throw new Error(`unknown control '${id}'`);
    if (!Number.isFinite(value) || value < spec.min || value > spec.max) {
      this.revert(spec);
      this.showError(
        `${spec.label}: ${value} is outside [${spec.min}, ${spec.max}]`
      );
      return "rejected-range";
    }
    this.hideError();
    this.pending.set(spec.id, { spec, value });
    if (this.inFlight) return "applied"; // coalesced into the running flush
    return this.flush();
  }

  private async flush(): Promise<EditResult> {
    this.inFlight = true;
    let result: EditResult = "applied";
    try {
      while (this.pending.size > 0) {
        const batch = [...this.pending.values()];
        this.pending.clear();
        let partial: Record<string, unknown> = {};
        for (const { spec, value } of batch) {
          partial = mergePartial(partial, spec.patch(value));
        }
        try {
          const state = await this.api.postParams(partial);
          this.display(state);
          this.onstate(state);
        } catch (err) {
          for (const { spec } of batch) this.revert(spec);
          this.showError(err instanceof Error ? err.message : String(err));
          result = "rejected-service";
        }
      }
    } finally {
      this.inFlight = false;
    }
    return result;
  }

  private revert(spec: ControlSpec): void {
    if (!this.acknowledged) return;
    const value = spec.read(this.acknowledged.params);
    this.inputs.get(spec.id)!.value = String(value);
    this.valueLabels.get(spec.id)!.textContent = value.toFixed(2);
  }

  private showError(message: string): void {
    this.errorBox.textContent = message;
    this.errorBox.style.display = "block";
  }

  private hideError(): void {
    this.errorBox.style.display = "none";
  }

  get errorText(): string | null {
    return this.errorBox.style.display === "none"
      ? null
      : this.errorBox.textContent;
  }
}

function mergePartial(
  base: Record<string, unknown>,
  extra: Record<string, unknown>
): Record<string, unknown> {
  const out = { ...base };
  for (const [key, value] of Object.entries(extra)) {
    const existing = out[key];
    if (
      existing &&
      typeof existing === "object" &&
      value &&
      typeof value === "object" &&
      !Array.isArray(value)
    ) {
      out[key] = mergePartial(
        existing as Record<string, unknown>,
        value as Record<string, unknown>
      );
    } else {
      out[key] = value;
    }
  }
  return out;
}
