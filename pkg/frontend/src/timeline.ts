/**
 * Footfall timeline: a Hildebrand-style strip of planted intervals per
 * leg over one gait cycle. The intervals come from sampling GET /frame
 * across the cycle (sub-frame times are allowed by the service), so the
 * client never re-derives stance windows from the parameters.
 */

import { ApiClient, StateDoc } from "./api.js";

export const TIMELINE_LEGS = ["FR", "FL", "BR", "BL"] as const;

export interface FootfallData {
  /** samples[leg][k] = planted at sample k */
  samples: Record<string, boolean[]>;
  /** legs ordered by their first touch-down inside the cycle */
  order: string[];
  cycleFrames: number;
}

/**
 * Sample one cycle of planted flags from the service.
 *
 * The window is cycle-aligned and starts at or after the playhead, so a
 * finished preset transition is fully reflected (earlier times would
 * still blend toward the old parameters) and the strip always begins at
 * cycle phase zero.
 */
export async function sampleFootfalls(
  api: ApiClient,
  state: StateDoc,
  resolution = 64
): Promise<FootfallData> {
  const cycleFrames = state.fps / state.params.motion_frequency;
  const start = Math.ceil(state.playhead / cycleFrames) * cycleFrames;
  const samples: Record<string, boolean[]> = {};
  for (const leg of TIMELINE_LEGS) samples[leg] = [];
  for (let k = 0; k <= resolution; k++) {
    const frame = await api.frame(start + (cycleFrames * k) / resolution);
    for (const leg of TIMELINE_LEGS) {
      samples[leg].push(frame.feet[leg].planted);
    }
  }
  return { samples, order: touchDownOrder(samples), cycleFrames };
}

/**
 * Order legs by the first swing-to-stance transition in the samples.
 *
 * The samples cover exactly one cycle with the endpoint duplicated
 * (sample 0 and sample N share a phase), so edges are detected
 * cyclically over the first N entries; a stance window starting at
 * phase 0 counts as an edge at 0, not at the window's far end.
 */
export function touchDownOrder(samples: Record<string, boolean[]>): string[] {
  const firstEdge = new Map<string, number>();
  for (const leg of TIMELINE_LEGS) {
    const flags = samples[leg];
    const n = flags.length > 1 ? flags.length - 1 : flags.length;
    for (let k = 0; k < n; k++) {
      if (flags[k] && !flags[(k - 1 + n) % n]) {
        firstEdge.set(leg, k);
        break;
      }
    }
  }
  return [...TIMELINE_LEGS]
    .filter((leg) => firstEdge.has(leg))
    .sort((a, b) => firstEdge.get(a)! - firstEdge.get(b)!);
}

export class FootfallTimeline {
  readonly root: HTMLElement;
  private rows = new Map<string, HTMLElement>();
  private orderLabel: HTMLElement;
  lastData: FootfallData | null = null;

  constructor(host: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "footfall-timeline";
    for (const leg of TIMELINE_LEGS) {
      const row = document.createElement("div");
      row.className = "timeline-row";
      const label = document.createElement("span");
      label.textContent = leg;
      const strip = document.createElement("div");
      strip.className = "timeline-strip";
      strip.dataset.leg = leg;
      row.append(label, strip);
      this.root.appendChild(row);
      this.rows.set(leg, strip);
    }
    this.orderLabel = document.createElement("div");
    this.orderLabel.className = "timeline-order";
    this.root.appendChild(this.orderLabel);
    host.appendChild(this.root);
  }

  async refresh(api: ApiClient, state: StateDoc): Promise<FootfallData> {
    const data = await sampleFootfalls(api, state);
    this.lastData = data;
    for (const leg of TIMELINE_LEGS) {
      const strip = this.rows.get(leg)!;
      strip.textContent = "";
      const flags = data.samples[leg];
      let start: number | null = null;
      for (let k = 0; k <= flags.length; k++) {
        const planted = k < flags.length && flags[k];
        if (planted && start === null) start = k;
        if (!planted && start !== null) {
          const bar = document.createElement("span");
          bar.className = "timeline-bar";
          bar.style.left = `${(100 * start) / flags.length}%`;
          bar.style.width = `${(100 * (k - start)) / flags.length}%`;
          strip.appendChild(bar);
          start = null;
        }
      }
    }
    this.orderLabel.textContent = `footfall order: ${data.order.join(", ")}`;
    return data;
  }

  get displayedOrder(): string[] {
    return this.lastData ? this.lastData.order : [];
  }
}
