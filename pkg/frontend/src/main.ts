/** Studio entry point: wires the panel, viewport, timeline, and presets. */

import { ApiClient } from "./api.js";
import { ParamPanel } from "./panel.js";
import { PresetSwitcher } from "./presets.js";
import { FootfallTimeline } from "./timeline.js";
import { Viewport } from "./viewport.js";

function el(id: string): HTMLElement {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node;
}

async function boot(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const base =
    params.get("service") ??
    (window.location.port === "8000" ? "" : "http://localhost:8000");
  const api = new ApiClient(base);

  const viewport = new Viewport(api, el("viewport"));
  const panel = new ParamPanel(api, el("panel"));
  const timeline = new FootfallTimeline(el("timeline"));
  const presets = new PresetSwitcher(api, el("presets"));

  const state = await api.state();
  await viewport.connect(state.fps);
  panel.display(state);
  presets.display(state);
  await viewport.scrub(0);
  await timeline.refresh(api, state);

  const refreshTimeline = async () => {
    const fresh = await api.state();
    panel.display(fresh);
    presets.display(fresh);
    await timeline.refresh(api, fresh);
  };

  panel.onstate = (s) => {
    presets.display(s);
    void timeline.refresh(api, s);
  };
  presets.onstate = (s) => {
    panel.display(s);
    // refresh once the transition window has played through
    const doneAt = s.transition
      ? s.transition.start_frame + s.transition.duration_frames
      : viewport.playhead;
    const wait = Math.max(
      0,
      ((doneAt - viewport.playhead) / s.fps) * 1000 + 50
    );
    setTimeout(() => void refreshTimeline(), wait);
  };

  el("play").addEventListener("click", () => viewport.play());
  el("pause").addEventListener("click", () => viewport.pause());
  const scrub = el("scrub") as HTMLInputElement;
  scrub.addEventListener("input", () => {
    viewport.pause();
    void viewport.scrub(Number(scrub.value));
  });
  viewport.onframe = (frame) => {
    el("playhead-label").textContent = `t = ${frame.t.toFixed(1)}`;
  };
}

void boot().catch((err) => {
  const banner = document.createElement("div");
  banner.className = "boot-error";
  banner.textContent = `cannot reach the quadgait service: ${err}`;
  document.body.prepend(banner);
});
