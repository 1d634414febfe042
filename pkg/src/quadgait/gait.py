"""Gait parameters, the normalized cyclic-time model, and the preset library.

The gait cycle is measured in eighths: a leg's stance window starts at its
impact_phase and lasts impact_duration eighths (duty factor = duration/8).
The amble preset is the canonical reference gait: motion frequency 4, impact
duration 3, impact phases FR=1, FL=5, BR=7, BL=3.
"""

from __future__ import annotations

import copy
import hashlib
import json
import math
from dataclasses import dataclass, field, fields

LEG_IDS = ("FR", "FL", "BR", "BL")
PHASE_UNITS = 8.0

STANCE = "stance"
SWING = "swing"


@dataclass
class LegParams:
    impact_phase: float = 0.0  # cycle eighths in [0, 8)
    impact_duration: float = 4.0  # cycle eighths in (0, 8)
    leg_oscillation: float = 0.0  # scene units, sternum coupling amplitude
    leg_cycle: float = 1.0  # per-leg cycle rate, informational
    step_height: float = 0.10  # swing arc apex, scene units

    def __post_init__(self):
        if not 0.0 <= self.impact_phase < PHASE_UNITS:
            raise ValueError(f"impact_phase must be in [0, 8), got {self.impact_phase}")
        if not 0.0 < self.impact_duration < PHASE_UNITS:
            raise ValueError(f"impact_duration must be in (0, 8), got {self.impact_duration}")
        if self.step_height < 0.0:
            raise ValueError(f"step_height must be >= 0, got {self.step_height}")

    @property
    def swing_duration(self) -> float:
        return PHASE_UNITS - self.impact_duration


def _default_legs() -> dict[str, LegParams]:
    return {leg_id: LegParams() for leg_id in LEG_IDS}


@dataclass
class GaitParams:
    motion_frequency: float = 1.0  # cycles per second ("Speed")
    counter_gait_error: float = 1.0  # dimensionless scale, must stay > 0
    joint_error: float = 0.0  # dimensionless phase offset
    spine_oscillation: float = 0.0  # radians, shared joint wave amplitude
    body_height: float = 1.10  # root height, scene units ("High")
    bounce: float = 0.0  # vertical bob amplitude, scene units
    head_high: float = 0.0  # static neck lift, scene units
    head_pos: float = 0.0  # static head pitch, radians
    head_oscillation: float = 1.0  # head wave cycles per gait cycle
    tail_swing: float = 1.0  # tail wave cycles per gait cycle
    stride_length: float = 0.8  # forward travel per gait cycle, scene units
    legs: dict[str, LegParams] = field(default_factory=_default_legs)

    def __post_init__(self):
        if self.motion_frequency <= 0.0:
            raise ValueError(f"motion_frequency must be > 0, got {self.motion_frequency}")
        if self.counter_gait_error <= 0.0:
            raise ValueError(f"counter_gait_error must be > 0, got {self.counter_gait_error}")
        if self.spine_oscillation < 0.0:
            raise ValueError(f"spine_oscillation must be >= 0, got {self.spine_oscillation}")
        if self.bounce < 0.0:
            raise ValueError(f"bounce must be >= 0, got {self.bounce}")
        if self.stride_length < 0.0:
            raise ValueError(f"stride_length must be >= 0, got {self.stride_length}")
        if set(self.legs) != set(LEG_IDS):
            raise ValueError(f"legs must be keyed exactly by {LEG_IDS}, got {sorted(self.legs)}")

    def copy(self) -> "GaitParams":
        return copy.deepcopy(self)


@dataclass(frozen=True)
class LegPhaseState:
    mode: str  # STANCE | SWING
    progress: float  # [0, 1) within the current window
    absolute_phase: float  # cycle eighths in [0, 8)


@dataclass(frozen=True)
class GaitPreset:
    name: str
    params: GaitParams


def cyclic_time(tf: float, fps: float, motion_frequency: float) -> float:
    """Normalized cycle phase in [0, 1): fractional part of (tf/fps)*freq."""
    if fps <= 0.0:
        raise ValueError(f"fps must be > 0, got {fps}")
    if motion_frequency <= 0.0:
        raise ValueError(f"motion_frequency must be > 0, got {motion_frequency}")
    if tf < 0.0:
        raise ValueError(f"frame index must be >= 0, got {tf}")
    return ((tf / fps) * motion_frequency) % 1.0


def leg_phase(global_phase: float, leg: LegParams) -> LegPhaseState:
    """Classify one leg at a global cycle phase.

    The stance window is [impact_phase, impact_phase + impact_duration)
    mod 8; progress runs from the window start, normalized by its length.
    """
    if not 0.0 <= global_phase < 1.0:
        raise ValueError(f"global_phase must be in [0, 1), got {global_phase}")
    absolute = global_phase * PHASE_UNITS
    since_impact = (absolute - leg.impact_phase) % PHASE_UNITS
    if since_impact < leg.impact_duration:
        return LegPhaseState(STANCE, since_impact / leg.impact_duration, absolute)
    return LegPhaseState(
        SWING, (since_impact - leg.impact_duration) / leg.swing_duration, absolute
    )


def footfall_order(params: GaitParams) -> list[str]:
    """Leg ids sorted by impact phase; ties keep the FR, FL, BR, BL order."""
    return sorted(LEG_IDS, key=lambda leg_id: (params.legs[leg_id].impact_phase, LEG_IDS.index(leg_id)))


def circular_phase_blend(a: float, b: float, t: float) -> float:
    """Interpolate on the 8-unit circle along the shorter arc.

    A tie (the values exactly half the circle apart) goes in the
    increasing direction. Endpoints are returned exactly.
    """
    if t == 0.0 or a == b:
        return a
    if t == 1.0:
        return b
    d = (b - a) % PHASE_UNITS
    if d > PHASE_UNITS / 2.0:
        d -= PHASE_UNITS
    return (a + t * d) % PHASE_UNITS


def _lerp(a: float, b: float, t: float) -> float:
    if a == b:
        return a
    return a * (1.0 - t) + b * t


def blend_params(a: GaitParams, b: GaitParams, t: float) -> GaitParams:
    """Interpolate gait parameters; impact phases blend circularly."""
    if not 0.0 <= t <= 1.0:
        raise ValueError(f"blend factor must be in [0, 1], got {t}")
    scalar_fields = [
        f.name for f in fields(GaitParams) if f.name != "legs"
    ]
    kwargs = {name: _lerp(getattr(a, name), getattr(b, name), t) for name in scalar_fields}
    legs = {}
    eps = 1e-9
    for leg_id in LEG_IDS:
        la, lb = a.legs[leg_id], b.legs[leg_id]
        duration = _lerp(la.impact_duration, lb.impact_duration, t)
        duration = min(max(duration, eps), PHASE_UNITS - eps)
        legs[leg_id] = LegParams(
            impact_phase=circular_phase_blend(la.impact_phase, lb.impact_phase, t),
            impact_duration=duration,
            leg_oscillation=_lerp(la.leg_oscillation, lb.leg_oscillation, t),
            leg_cycle=_lerp(la.leg_cycle, lb.leg_cycle, t),
            step_height=_lerp(la.step_height, lb.step_height, t),
        )
    return GaitParams(legs=legs, **kwargs)


def params_to_dict(params: GaitParams) -> dict:
    """Plain nested dict of every field, shared by preset files and the API."""
    doc = {
        f.name: getattr(params, f.name) for f in fields(GaitParams) if f.name != "legs"
    }
    doc["legs"] = {
        leg_id: {
            "impact_phase": leg.impact_phase,
            "impact_duration": leg.impact_duration,
            "swing_duration": leg.swing_duration,
            "leg_oscillation": leg.leg_oscillation,
            "leg_cycle": leg.leg_cycle,
            "step_height": leg.step_height,
        }
        for leg_id, leg in params.legs.items()
    }
    return doc


_SCALAR_FIELDS = tuple(f.name for f in fields(GaitParams) if f.name != "legs")
_LEG_FIELDS = ("impact_phase", "impact_duration", "swing_duration", "leg_oscillation", "leg_cycle", "step_height")


def params_from_dict(doc: dict) -> GaitParams:
    """Inverse of params_to_dict with strict field checking.

    Unknown or missing fields raise ValueError naming the field;
    swing_duration, if present, must agree with impact_duration.
    """
    if not isinstance(doc, dict):
        raise ValueError("params document must be a mapping")
    for key in doc:
        if key != "legs" and key not in _SCALAR_FIELDS:
            raise ValueError(f"unknown field '{key}'")
    missing = [name for name in _SCALAR_FIELDS if name not in doc]
    if missing:
        raise ValueError(f"missing required field '{missing[0]}'")
    if "legs" not in doc:
        raise ValueError("missing required field 'legs'")
    legs_doc = doc["legs"]
    if set(legs_doc) != set(LEG_IDS):
        raise ValueError(f"legs must be keyed exactly by {LEG_IDS}, got {sorted(legs_doc)}")
    legs = {}
    for leg_id in LEG_IDS:
        leg_doc = legs_doc[leg_id]
        for key in leg_doc:
            if key not in _LEG_FIELDS:
                raise ValueError(f"unknown field 'legs.{leg_id}.{key}'")
        for name in ("impact_phase", "impact_duration"):
            if name not in leg_doc:
                raise ValueError(f"missing required field 'legs.{leg_id}.{name}'")
        leg = LegParams(
            impact_phase=float(leg_doc["impact_phase"]),
            impact_duration=float(leg_doc["impact_duration"]),
            leg_oscillation=float(leg_doc.get("leg_oscillation", 0.0)),
            leg_cycle=float(leg_doc.get("leg_cycle", 1.0)),
            step_height=float(leg_doc.get("step_height", 0.1)),
        )
        if "swing_duration" in leg_doc:
            if abs(float(leg_doc["swing_duration"]) - leg.swing_duration) > 1e-9:
                raise ValueError(
                    f"legs.{leg_id}.swing_duration must equal 8 - impact_duration"
                )
        legs[leg_id] = leg
    scalars = {name: float(doc[name]) for name in _SCALAR_FIELDS}
    return GaitParams(legs=legs, **scalars)


def params_fingerprint(params: GaitParams) -> str:
    """Stable digest of a parameter set, echoed by the service per frame."""
    doc = json.dumps(params_to_dict(params), sort_keys=True)
    return hashlib.sha256(doc.encode()).hexdigest()[:16]


def _make_leg(phase, duration, osc, cycle, step):
    return LegParams(
        impact_phase=phase,
        impact_duration=duration,
        leg_oscillation=osc,
        leg_cycle=cycle,
        step_height=step,
    )


def _walk() -> GaitParams:
    # lateral-sequence four-beat: BL, FL, BR, FR evenly spaced, duty 5/8
    return GaitParams(
        motion_frequency=1.0,
        spine_oscillation=0.06,
        body_height=1.10,
        bounce=0.015,
        head_oscillation=1.0,
        tail_swing=1.0,
        stride_length=0.8,
        legs={
            "FR": _make_leg(6.0, 5.0, 0.02, 1.0, 0.08),
            "FL": _make_leg(2.0, 5.0, 0.02, 1.0, 0.08),
            "BR": _make_leg(4.0, 5.0, 0.02, 1.0, 0.08),
            "BL": _make_leg(0.0, 5.0, 0.02, 1.0, 0.08),
        },
    )


def _amble() -> GaitParams:
    # canonical values: frequency 4, duration 3, phases FR=1 FL=5 BR=7 BL=3
    return GaitParams(
        motion_frequency=4.0,
        spine_oscillation=0.08,
        body_height=1.10,
        bounce=0.03,
        head_oscillation=1.0,
        tail_swing=2.0,
        stride_length=0.9,
        legs={
            "FR": _make_leg(1.0, 3.0, 0.02, 4.0, 0.10),
            "FL": _make_leg(5.0, 3.0, 0.02, 4.0, 0.10),
            "BR": _make_leg(7.0, 3.0, 0.02, 4.0, 0.10),
            "BL": _make_leg(3.0, 3.0, 0.02, 4.0, 0.10),
        },
    )


def _trot() -> GaitParams:
    # diagonal pairs in anti-phase; non-canonical, see docs
    return GaitParams(
        motion_frequency=2.0,
        spine_oscillation=0.10,
        body_height=1.10,
        bounce=0.03,
        head_oscillation=2.0,
        tail_swing=2.0,
        stride_length=1.1,
        legs={
            "FR": _make_leg(0.0, 3.5, 0.03, 2.0, 0.12),
            "FL": _make_leg(4.0, 3.5, 0.03, 2.0, 0.12),
            "BR": _make_leg(4.0, 3.5, 0.03, 2.0, 0.12),
            "BL": _make_leg(0.0, 3.5, 0.03, 2.0, 0.12),
        },
    )


def _gallop() -> GaitParams:
    # transverse four-beat with a suspension window; non-canonical, see docs
    return GaitParams(
        motion_frequency=3.0,
        spine_oscillation=0.12,
        body_height=1.10,
        bounce=0.03,
        head_oscillation=1.0,
        tail_swing=3.0,
        stride_length=1.2,
        legs={
            "FR": _make_leg(3.0, 3.0, 0.03, 3.0, 0.14),
            "FL": _make_leg(2.0, 3.0, 0.03, 3.0, 0.14),
            "BR": _make_leg(1.0, 3.0, 0.03, 3.0, 0.14),
            "BL": _make_leg(0.0, 3.0, 0.03, 3.0, 0.14),
        },
    )


_PRESETS = {
    "walk": _walk,
    "amble": _amble,
    "trot": _trot,
    "gallop": _gallop,
}


def preset_names() -> tuple[str, ...]:
    return tuple(_PRESETS)


def preset(name: str) -> GaitPreset:
    """Fresh copy of a library preset; mutations never touch the library."""
    if name not in _PRESETS:
        raise KeyError(f"unknown preset '{name}'; available: {', '.join(_PRESETS)}")
    return GaitPreset(name=name, params=_PRESETS[name]())


def frames_per_cycle(fps: float, motion_frequency: float) -> float:
    if fps <= 0.0 or motion_frequency <= 0.0:
        raise ValueError("fps and motion_frequency must be > 0")
    return fps / motion_frequency


def stance_fraction(leg: LegParams) -> float:
    """Duty factor: fraction of the cycle the foot is grounded."""
    return leg.impact_duration / PHASE_UNITS


def grounded_count(params: GaitParams, global_phase: float) -> int:
    return sum(
        1 for leg_id in LEG_IDS if leg_phase(global_phase, params.legs[leg_id]).mode == STANCE
    )
