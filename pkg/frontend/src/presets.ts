/**
 * Preset switcher: pick a preset from the list served by /state, choose
 * a transition length, POST /transition, and show blend progress until
 * it completes. Service rejections appear inline.
 */

import { ApiClient, StateDoc } from "./api.js";

export class PresetSwitcher {
  readonly root: HTMLElement;
  private select: HTMLSelectElement;
  private duration: HTMLInputElement;
  private progress: HTMLElement;
  private error: HTMLElement;

  onstate: (state: StateDoc) => void = () => {};

  constructor(private api: ApiClient, host: HTMLElement) {
    this.root = document.createElement("div");
    this.root.className = "preset-switcher";
    this.select = document.createElement("select");
    this.duration = document.createElement("input");
    this.duration.type = "number";
    this.duration.min = "1";
    this.duration.value = "24";
    const go = document.createElement("button");
    go.textContent = "Transition";
    go.addEventListener("click", () => {
      void this.apply();
    });
    this.progress = document.createElement("span");
    this.progress.className = "transition-progress";
    this.error = document.createElement("span");
    this.error.className = "preset-error";
    this.error.style.display = "none";
    this.root.append(this.select, this.duration, go, this.progress, this.error);
    host.appendChild(this.root);
  }

  display(state: StateDoc): void {
    if (this.select.options.length !== state.presets.length) {
      this.select.textContent = "";
      for (const name of state.presets) {
        const option = document.createElement("option");
        option.value = name;
        option.textContent = name;
        this.select.appendChild(option);
      }
    }
    if (state.transition) {
      const pct = Math.round(state.transition.progress * 100);
      this.progress.textContent = `${state.preset} ${pct}%`;
    } else {
      this.progress.textContent = state.preset;
    }
  }

  async apply(name?: string, duration?: number): Promise<StateDoc | null> {
    const target = name ?? this.select.value;
    const frames = duration ?? Number(this.duration.value);
    this.error.style.display = "none";
    try {
      const state = await this.api.startTransition(target, frames);
      this.display(state);
      this.onstate(state);
      return state;
    } catch (err) {
      this.error.textContent = err instanceof Error ? err.message : String(err);
      this.error.style.display = "inline";
      return null;
    }
  }

  get errorText(): string | null {
    return this.error.style.display === "none" ? null : this.error.textContent;
  }
}
