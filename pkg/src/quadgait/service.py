"""HTTP control surface for a live engine session.

One session per process. Parameter mutations are serialized behind a
lock and swap an immutable state snapshot; frame requests evaluate
against the snapshot they grabbed, so concurrent reads never observe a
half-applied update. Frames are pulled by time (GET /frame?t=...), which
keeps the engine stateless and random-access.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .clips import bake, clip_to_json_dict
from .engine import EvalContext, evaluate_frame_full
from .gait import (
    GaitParams,
    blend_params,
    footfall_order,
    params_fingerprint,
    params_from_dict,
    params_to_dict,
    preset,
    preset_names,
)
from .rotations import matrix_to_euler
from .skeleton import Skeleton, build_quadruped_template, local_to_world


@dataclass(frozen=True)
class Transition:
    from_params: GaitParams
    to_params: GaitParams
    target_name: str
    start_frame: float
    duration_frames: float


@dataclass(frozen=True)
class SessionState:
    params: GaitParams
    preset_name: str
    transition: Transition | None
    playhead: float


class Session:
    """Single-writer session: mutations swap the snapshot atomically."""

    def __init__(self, skeleton: Skeleton, params: GaitParams, preset_name: str, fps: float):
        self.skeleton = skeleton
        self.fps = fps
        self._lock = threading.Lock()
        self._state = SessionState(
            params=params, preset_name=preset_name, transition=None, playhead=0.0
        )

    def snapshot(self) -> SessionState:
        return self._state

    @staticmethod
    def effective_params(state: SessionState, t: float) -> GaitParams:
        tr = state.transition
        if tr is None:
            return state.params
        u = (t - tr.start_frame) / tr.duration_frames
        u = min(1.0, max(0.0, u))
        return blend_params(tr.from_params, tr.to_params, u)

    def set_playhead(self, t: float) -> None:
        with self._lock:
            self._state = replace(self._state, playhead=t)

    def update_params(self, partial: dict) -> SessionState:
        """Deep-merge a partial document; collapses any active transition."""
        with self._lock:
            state = self._state
            doc = params_to_dict(self.effective_params(state, state.playhead))
            for key, value in partial.items():
                if key == "legs":
                    if not isinstance(value, dict):
                        raise ValueError("legs must be a mapping")
                    for leg_id, leg_doc in value.items():
                        if leg_id not in doc["legs"]:
                            raise ValueError(f"unknown leg '{leg_id}'")
                        if not isinstance(leg_doc, dict):
                            raise ValueError(f"legs.{leg_id} must be a mapping")
                        merged = dict(doc["legs"][leg_id])
                        merged.update(leg_doc)
                        if "impact_duration" in leg_doc and "swing_duration" not in leg_doc:
                            merged["swing_duration"] = 8.0 - float(leg_doc["impact_duration"])
                        doc["legs"][leg_id] = merged
                else:
                    doc[key] = value
            params = params_from_dict(doc)
            self._state = SessionState(
                params=params,
                preset_name="custom",
                transition=None,
                playhead=state.playhead,
            )
            return self._state

    def apply_preset(self, name: str) -> SessionState:
        chosen = preset(name)  # KeyError for unknown names
        with self._lock:
            self._state = SessionState(
                params=chosen.params,
                preset_name=chosen.name,
                transition=None,
                playhead=self._state.playhead,
            )
            return self._state

    def start_transition(self, name: str, duration_frames: float) -> SessionState:
        if duration_frames < 1:
            raise ValueError("transition duration must be >= 1 frame")
        chosen = preset(name)  # KeyError for unknown names
        with self._lock:
            state = self._state
            current = self.effective_params(state, state.playhead)
            self._state = SessionState(
                params=current,
                preset_name=state.preset_name,
                transition=Transition(
                    from_params=current,
                    to_params=chosen.params,
                    target_name=chosen.name,
                    start_frame=state.playhead,
                    duration_frames=float(duration_frames),
                ),
                playhead=state.playhead,
            )
            return self._state


def _state_doc(session: Session, state: SessionState) -> dict:
    effective = Session.effective_params(state, state.playhead)
    tr = state.transition
    transition_doc = None
    if tr is not None:
        progress = (state.playhead - tr.start_frame) / tr.duration_frames
        transition_doc = {
            "target": tr.target_name,
            "start_frame": tr.start_frame,
            "duration_frames": tr.duration_frames,
            "progress": min(1.0, max(0.0, progress)),
        }
    return {
        "preset": state.preset_name if tr is None else f"{state.preset_name}->{tr.target_name}",
        "params": params_to_dict(effective),
        "fingerprint": params_fingerprint(effective),
        "playhead": state.playhead,
        "fps": session.fps,
        "presets": list(preset_names()),
        "footfall_order": footfall_order(effective),
        "transition": transition_doc,
    }


def create_app(session: Session) -> FastAPI:
    app = FastAPI(title="quadgait service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ValueError)
    async def value_error_handler(_req, err):
        return JSONResponse(status_code=400, content={"error": str(err)})

    @app.exception_handler(KeyError)
    async def key_error_handler(_req, err):
        return JSONResponse(status_code=404, content={"error": err.args[0]})

    @app.get("/state")
    def get_state():
        return _state_doc(session, session.snapshot())

    @app.get("/skeleton")
    def get_skeleton():
        skel = session.skeleton
        return {
            "root": skel.root.name,
            "joints": [
                {
                    "name": j.name,
                    "parent": j.parent,
                    "offset": list(j.rest_offset),
                    "dof": list(j.dof),
                }
                for j in skel.joints
            ],
            "legs": {leg.leg_id: list(leg.joints) for leg in skel.legs},
            "chains": {name: list(joints) for name, joints in skel.chains.items()},
        }

    @app.get("/frame")
    def get_frame(t: float):
        state = session.snapshot()
        effective = Session.effective_params(state, t)
        ev = evaluate_frame_full(EvalContext(t, session.fps), effective, session.skeleton)
        world = local_to_world(session.skeleton, ev.pose)
        body = {
            "t": t,
            "fingerprint": ev.fingerprint,
            "params": params_to_dict(effective),
            "root_translation": list(ev.pose.root_translation),
            "joints": {
                j.name: {
                    "position": [float(v) for v in world.position(j.name)],
                    "rotation": list(ev.pose.rotations.get(j.name, (0.0, 0.0, 0.0))),
                    "world_rotation": list(matrix_to_euler(world.orientation(j.name))),
                }
                for j in session.skeleton.joints
            },
            "feet": {
                leg_id: {
                    "planted": target.planted,
                    "position": [float(v) for v in target.world_position],
                    "reached": ev.leg_reached[leg_id],
                    "mode": ev.leg_states[leg_id].mode,
                    "progress": ev.leg_states[leg_id].progress,
                }
                for leg_id, target in ev.foot_targets.items()
            },
        }
        session.set_playhead(t)
        return body

    @app.get("/clip")
    def get_clip(frames: int):
        state = session.snapshot()
        effective = Session.effective_params(state, state.playhead)
        clip = bake(effective, session.skeleton, None, session.fps, frames)
        return clip_to_json_dict(clip)

    @app.post("/params")
    async def post_params(request: Request):
        partial = await request.json()
        if not isinstance(partial, dict):
            raise ValueError("params update must be a JSON object")
        state = session.update_params(partial)
        return _state_doc(session, state)

    @app.post("/preset/{name}")
    def post_preset(name: str):
        state = session.apply_preset(name)
        return _state_doc(session, state)

    @app.post("/transition")
    async def post_transition(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "name" not in body:
            raise ValueError("transition body must carry 'name' (and optional 'duration')")
        state = session.start_transition(str(body["name"]), float(body.get("duration", 24)))
        return _state_doc(session, state)

    return app


def serve(port: int, preset_name: str, params: GaitParams, fps: float, ui_dir=None) -> None:
    import uvicorn

    session = Session(build_quadruped_template(), params, preset_name, fps)
    app = create_app(session)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="studio")
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
