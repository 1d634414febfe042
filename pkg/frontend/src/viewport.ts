/**
 * Stick-figure viewport: bones are lines between the world positions of
 * exactly the parent-child pairs of the fetched hierarchy, plus ground
 * markers for planted feet. Orbit camera, wall-clock playback pulling
 * GET /frame, scrubbing, and a visible error banner on fetch failure
 * (playback pauses, no silent retry).
 */

import { ApiClient, FrameDoc, SkeletonDoc } from "./api.js";

export interface Camera {
  yaw: number; // rad, orbit around the vertical axis
  pitch: number; // rad, elevation
  distance: number;
  target: [number, number, number];
}

export interface Segment {
  from: [number, number];
  to: [number, number];
  joint: string;
  parent: string;
}

export interface FootMarker {
  leg: string;
  at: [number, number];
  planted: boolean;
}

function project(
  point: [number, number, number],
  camera: Camera,
  width: number,
  height: number
): [number, number] {
  const [px, py, pz] = [
    point[0] - camera.target[0],
    point[1] - camera.target[1],
    point[2] - camera.target[2],
  ];
  const cy = Math.cos(camera.yaw);
  const sy = Math.sin(camera.yaw);
  const cp = Math.cos(camera.pitch);
  const sp = Math.sin(camera.pitch);
  // orbit: yaw about Y, then pitch about the camera X axis
  const x1 = cy * px + sy * pz;
  const z1 = -sy * px + cy * pz;
  const y2 = cp * py - sp * z1;
  const z2 = sp * py + cp * z1;
  const depth = camera.distance + z2;
  const scale = (Math.min(width, height) * 0.9) / Math.max(depth, 0.1);
  return [width / 2 + x1 * scale, height / 2 - y2 * scale];
}

/** Pure projection of one frame into drawable segments and markers. */
export function projectFrame(
  frame: FrameDoc,
  skeleton: SkeletonDoc,
  camera: Camera,
  width: number,
  height: number
): { segments: Segment[]; markers: FootMarker[] } {
  const segments: Segment[] = [];
  for (const joint of skeleton.joints) {
    if (joint.parent === null) continue;
    const a = frame.joints[joint.parent];
    const b = frame.joints[joint.name];
    if (!a || !b) continue;
    segments.push({
      from: project(a.position, camera, width, height),
      to: project(b.position, camera, width, height),
      joint: joint.name,
      parent: joint.parent,
    });
  }
  const markers: FootMarker[] = [];
  for (const [leg, foot] of Object.entries(frame.feet)) {
    markers.push({
      leg,
      at: project(foot.position, camera, width, height),
      planted: foot.planted,
    });
  }
  return { segments, markers };
}

export class Viewport {
  camera: Camera = { yaw: 0.6, pitch: 0.25, distance: 4, target: [0, 0.8, 0] };
  playing = false;
  playhead = 0;
  lastFrame: FrameDoc | null = null;

  private errorBanner: HTMLElement;
  private canvas: HTMLCanvasElement;
  private skeleton: SkeletonDoc | null = null;
  private fetchInFlight = false;
  private lastTick = 0;
  private fps = 24;

  /** Fired after every rendered frame. */
  onframe: (frame: FrameDoc) => void = () => {};

  constructor(private api: ApiClient, host: HTMLElement) {
    this.canvas = document.createElement("canvas");
    this.canvas.width = 720;
    this.canvas.height = 480;
    this.canvas.className = "viewport-canvas";
    this.errorBanner = document.createElement("div");
    this.errorBanner.className = "viewport-error";
    this.errorBanner.style.display = "none";
    host.append(this.errorBanner, this.canvas);
    this.bindOrbit();
  }

  async connect(fps: number): Promise<void> {
    this.fps = fps;
    this.skeleton = await this.api.skeleton();
  }

  get errorText(): string | null {
    return this.errorBanner.style.display === "none"
      ? null
      : this.errorBanner.textContent;
  }

  play(): void {
    this.hideError();
    this.playing = true;
    this.lastTick = performance.now();
    this.tick();
  }

  pause(): void {
    this.playing = false;
  }

  async scrub(t: number): Promise<void> {
    this.playhead = Math.max(0, t);
    await this.renderAt(this.playhead);
  }

  private tick(): void {
    if (!this.playing) return;
    requestAnimationFrame(() => {
      if (!this.playing) return;
      const now = performance.now();
      this.playhead += ((now - this.lastTick) / 1000) * this.fps;
      this.lastTick = now;
      if (!this.fetchInFlight) {
        void this.renderAt(this.playhead);
      }
      this.tick();
    });
  }

  async renderAt(t: number): Promise<void> {
    if (!this.skeleton) return;
    this.fetchInFlight = true;
    try {
      const frame = await this.api.frame(t);
      this.lastFrame = frame;
      this.draw(frame);
      this.onframe(frame);
    } catch (err) {
      this.pause();
      this.showError(
        `frame fetch failed: ${err instanceof Error ? err.message : err}`
      );
    } finally {
      this.fetchInFlight = false;
    }
  }

  /** Redraw the last fetched frame (used by orbit drags while paused). */
  redraw(): void {
    if (this.lastFrame) this.draw(this.lastFrame);
  }

  private draw(frame: FrameDoc): void {
    if (!this.skeleton) return;
    const ctx = this.canvas.getContext("2d");
    if (!ctx) return; // no 2d context under the test DOM
    const { width, height } = this.canvas;
    const { segments, markers } = projectFrame(
      frame,
      this.skeleton,
      this.camera,
      width,
      height
    );
    ctx.clearRect(0, 0, width, height);
    ctx.strokeStyle = "#d8e1ea";
    ctx.lineWidth = 2;
    for (const seg of segments) {
      ctx.beginPath();
      ctx.moveTo(seg.from[0], seg.from[1]);
      ctx.lineTo(seg.to[0], seg.to[1]);
      ctx.stroke();
    }
    for (const marker of markers) {
      ctx.beginPath();
      ctx.fillStyle = marker.planted ? "#57d98f" : "#4a5561";
      ctx.arc(marker.at[0], marker.at[1], marker.planted ? 5 : 3, 0, Math.PI * 2);
      ctx.fill();
    }
  }

  private bindOrbit(): void {
    let dragging = false;
    let lastX = 0;
    let lastY = 0;
    this.canvas.addEventListener("mousedown", (e) => {
      dragging = true;
      lastX = e.clientX;
      lastY = e.clientY;
    });
    this.canvas.addEventListener("mousemove", (e) => {
      if (!dragging) return;
      this.camera.yaw += (e.clientX - lastX) * 0.01;
      this.camera.pitch = Math.min(
        1.4,
        Math.max(-1.4, this.camera.pitch + (e.clientY - lastY) * 0.01)
      );
      lastX = e.clientX;
      lastY = e.clientY;
      this.redraw();
    });
    window.addEventListener("mouseup", () => {
      dragging = false;
    });
    this.canvas.addEventListener("wheel", (e) => {
      e.preventDefault();
      this.camera.distance = Math.min(
        12,
        Math.max(1.2, this.camera.distance + e.deltaY * 0.002)
      );
      this.redraw();
    });
  }

  private showError(message: string): void {
    this.errorBanner.textContent = message;
    this.errorBanner.style.display = "block";
  }

  private hideError(): void {
    this.errorBanner.style.display = "none";
  }
}
