/**
 * Typed client for the quadgait tuning service.
 *
 * The studio computes no gait math of its own: every pose comes from
 * GET /frame, every displayed value from GET /state (or the state
 * document echoed by a mutation).
 */

export interface LegParamsDoc {
  impact_phase: number;
  impact_duration: number;
  swing_duration: number;
  leg_oscillation: number;
  leg_cycle: number;
  step_height: number;
}

export interface ParamsDoc {
  motion_frequency: number;
  counter_gait_error: number;
  joint_error: number;
  spine_oscillation: number;
  body_height: number;
  bounce: number;
  head_high: number;
  head_pos: number;
  head_oscillation: number;
  tail_swing: number;
  stride_length: number;
  legs: Record<string, LegParamsDoc>;
}

export interface TransitionDoc {
  target: string;
  start_frame: number;
  duration_frames: number;
  progress: number;
}

export interface StateDoc {
  preset: string;
  params: ParamsDoc;
  fingerprint: string;
  playhead: number;
  fps: number;
  presets: string[];
  footfall_order: string[];
  transition: TransitionDoc | null;
}

export interface JointDoc {
  name: string;
  parent: string | null;
  offset: [number, number, number];
  dof: string[];
}

export interface SkeletonDoc {
  root: string;
  joints: JointDoc[];
  legs: Record<string, string[]>;
  chains: Record<string, string[]>;
}

export interface FootDoc {
  planted: boolean;
  position: [number, number, number];
  reached: boolean;
  mode: string;
  progress: number;
}

export interface FrameDoc {
  t: number;
  fingerprint: string;
  params: ParamsDoc;
  root_translation: [number, number, number];
  joints: Record<
    string,
    { position: [number, number, number]; rotation: [number, number, number] }
  >;
  feet: Record<string, FootDoc>;
}

/** Error body from the service, kept for inline display. */
export class ServiceError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  if (!response.ok) {
    let message = `${response.status} ${response.statusText}`;
    try {
      const body = await response.json();
      if (body && typeof body.error === "string") message = body.error;
    } catch {
      /* non-JSON error body; keep the status text */
    }
    throw new ServiceError(message, response.status);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async state(): Promise<StateDoc> {
    return parseOrThrow(await fetch(this.url("/state")));
  }

  async skeleton(): Promise<SkeletonDoc> {
    return parseOrThrow(await fetch(this.url("/skeleton")));
  }

  async frame(t: number): Promise<FrameDoc> {
    return parseOrThrow(await fetch(this.url(`/frame?t=${t}`)));
  }

  /** Partial update; returns the acknowledged state document. */
  async postParams(partial: Record<string, unknown>): Promise<StateDoc> {
    return parseOrThrow(
      await fetch(this.url("/params"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(partial),
      })
    );
  }

  async applyPreset(name: string): Promise<StateDoc> {
    return parseOrThrow(
      await fetch(this.url(`/preset/${name}`), { method: "POST" })
    );
  }

  async startTransition(name: string, duration: number): Promise<StateDoc> {
    return parseOrThrow(
      await fetch(this.url("/transition"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ name, duration }),
      })
    );
  }
}
