"""Per-frame gait evaluation: trig body curves, foot targets, leg IK.

Time convention: tf is a (possibly fractional) frame index; angles are
built from tf/fps seconds as sin(t * 2*pi * motion_frequency * ...), so
"Speed" is cycles per second regardless of fps. Evaluation is stateless
and random-access in tf: stance pin positions are recomputed from cycle
arithmetic, never stored.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .gait import (
    LEG_IDS,
    PHASE_UNITS,
    STANCE,
    GaitParams,
    LegPhaseState,
    cyclic_time,
    leg_phase,
    params_fingerprint,
)
from .ik import binding_for_leg, solve_hind_leg, solve_two_bone
from .rotations import Vec3, matrix_to_euler
from .skeleton import Pose, Skeleton, local_to_world

TWO_PI = 2.0 * math.pi

# per-joint phase lag of the neck/tail traveling waves, radians
NECK_PHASE_FALLOFF = 0.4
TAIL_PHASE_FALLOFF = 0.7

WORLD_FORWARD = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class EvalContext:
    """Evaluation time point: frame index (sub-frame allowed) at a frame rate."""

    tf: float
    fps: float

    def __post_init__(self):
        if self.fps <= 0.0:
            raise ValueError(f"fps must be > 0, got {self.fps}")
        if self.tf < 0.0:
            raise ValueError(f"frame index must be >= 0, got {self.tf}")

    @property
    def seconds(self) -> float:
        return self.tf / self.fps


@dataclass(frozen=True)
class FootTarget:
    leg: str
    world_position: np.ndarray
    planted: bool


@dataclass(frozen=True)
class FrameEvaluation:
    """evaluate_frame output plus the per-leg report."""

    pose: Pose
    foot_targets: dict[str, FootTarget]
    leg_states: dict[str, LegPhaseState]
    leg_reached: dict[str, bool]
    fingerprint: str

    @property
    def warnings(self) -> list[str]:
        return [leg for leg, ok in self.leg_reached.items() if not ok]


def spine_swing(ctx: EvalContext, g: GaitParams) -> float:
    """Total lateral spine bend: sin(t*2pi*M_freq*C_error) * M_osc."""
    return (
        math.sin(ctx.seconds * TWO_PI * g.motion_frequency * g.counter_gait_error)
        * g.spine_oscillation
    )


def appendage_swing(
    ctx: EvalContext,
    g: GaitParams,
    cycles_multiplier: float,
    joint_index: int,
    chain_len: int,
    amplitude: float | None = None,
    phase_falloff: float = NECK_PHASE_FALLOFF,
) -> float:
    """One joint of a neck/tail sine wave.

    joint_error enters as an additive phase so the neutral default 0
    leaves a live curve; amplitude defaults to the shared joint
    oscillation (spine_oscillation).
    """
    if chain_len < 1:
        raise ValueError(f"chain_len must be >= 1, got {chain_len}")
    if not 0 <= joint_index < chain_len:
        raise ValueError(f"joint_index {joint_index} outside chain of {chain_len}")
    if amplitude is None:
        amplitude = g.spine_oscillation
    phase = (
        ctx.seconds * TWO_PI * g.motion_frequency * cycles_multiplier
        + g.joint_error
        + joint_index * phase_falloff
    )
    return math.sin(phase) * amplitude


def sternum_offset(ctx: EvalContext, g: GaitParams, leg_oscillation: float) -> float:
    """Fore-aft sternum travel: cos(t*2pi*M_freq - pi/4)*L_osc*C_error + J_error."""
    return (
        math.cos(ctx.seconds * TWO_PI * g.motion_frequency - math.pi / 4.0)
        * leg_oscillation
        * g.counter_gait_error
        + g.joint_error
    )


def root_motion(ctx: EvalContext, g: GaitParams) -> tuple[float, float]:
    """(forward distance, vertical height) of the root at this frame.

    Forward velocity is constant: stride_length per gait cycle.
    """
    forward = g.stride_length * g.motion_frequency * ctx.seconds
    vertical = g.body_height + g.bounce * abs(
        math.sin(ctx.seconds * TWO_PI * g.motion_frequency * 2.0)
    )
    return forward, vertical


def _stance_anchor_z(ctx, g, leg, state, root_travel):
    """Forward coordinate of the current stance pin (relative to the foot home).

    The pin is placed so the foot sits centered under its home at stance
    midpoint; successive pins advance by exactly one stride. Derived from
    the onset index, so every frame of one stance agrees bit-for-bit.
    """
    velocity = g.stride_length * g.motion_frequency
    eighth_seconds = 1.0 / (PHASE_UNITS * g.motion_frequency)
    since_impact = (state.absolute_phase - leg.impact_phase) % PHASE_UNITS
    eighths_total = PHASE_UNITS * g.motion_frequency * ctx.seconds
    onset_index = round((eighths_total - leg.impact_phase - since_impact) / PHASE_UNITS)
    onset_seconds_ago = ctx.seconds - (leg.impact_phase + PHASE_UNITS * onset_index) * eighth_seconds
    stance_seconds = leg.impact_duration * eighth_seconds
    return root_travel - velocity * onset_seconds_ago + velocity * stance_seconds / 2.0


def foot_target(
    ctx: EvalContext,
    g: GaitParams,
    leg_id: str,
    skeleton: Skeleton,
    root_travel: float,
) -> FootTarget:
    """World-space foot goal for this frame.

    Stance: pinned at the stance-onset capture (no slide). Swing: linear
    ground advance of one stride toward the next pin under a half-sine
    lift of step_height. Homes are the rest foot positions raised by
    body_height, so a zero-amplitude gait reproduces the rest pose.
    """
    leg = g.legs[leg_id]
    chain = skeleton.leg(leg_id)
    home = skeleton.rest_world_position(chain.joints[-1]) + np.array([0.0, g.body_height, 0.0])
    state = leg_phase(cyclic_time(ctx.tf, ctx.fps, g.motion_frequency), leg)
    pin_z = _stance_anchor_z(ctx, g, leg, state, root_travel)
    if state.mode == STANCE:
        position = np.array([home[0], home[1], home[2] + pin_z])
        return FootTarget(leg_id, position, True)
    s = state.progress
    z = pin_z + s * g.stride_length
    y = home[1] + leg.step_height * math.sin(math.pi * s)
    return FootTarget(leg_id, np.array([home[0], y, home[2] + z]), False)


def _rest_coupling_angle(skeleton, chain):
    shank = np.asarray(skeleton.joint(chain.joints[2]).rest_offset)
    cannon = np.asarray(skeleton.joint(chain.joints[3]).rest_offset)
    cos_a = float(np.dot(-shank, cannon) / (np.linalg.norm(shank) * np.linalg.norm(cannon)))
    return math.acos(min(1.0, max(-1.0, cos_a)))


def _body_pose(ctx, g, skeleton) -> Pose:
    """Everything except the legs: root, spine, neck/head, tail, sternum."""
    forward, vertical = root_motion(ctx, g)
    rotations: dict[str, Vec3] = {}
    translations: dict[str, Vec3] = {}

    spine = skeleton.chains.get("spine", ())
    if spine:
        per_joint = spine_swing(ctx, g) / len(spine)
        for name in spine:
            rotations[name] = (0.0, per_joint, 0.0)

    neck = skeleton.chains.get("neck", ())
    if neck:
        n = len(neck)
        for k, name in enumerate(neck):
            bend = appendage_swing(ctx, g, g.head_oscillation, k, n, phase_falloff=NECK_PHASE_FALLOFF)
            rotations[name] = (bend, 0.0, 0.0)
        head = neck[-1]
        bend = rotations[head]
        rotations[head] = (bend[0] + g.head_pos, bend[1], bend[2])
        if g.head_high != 0.0:
            translations[neck[0]] = (0.0, g.head_high, 0.0)

    tail = skeleton.chains.get("tail", ())
    if tail:
        n = len(tail)
        for k, name in enumerate(tail):
            bend = appendage_swing(ctx, g, g.tail_swing, k, n, phase_falloff=TAIL_PHASE_FALLOFF)
            rotations[name] = (bend, 0.0, 0.0)

    front_roots = [leg.joints[0] for leg in skeleton.legs if leg.kind == "front"]
    if front_roots:
        sternum_joint = skeleton.joint(front_roots[0]).parent
        if sternum_joint is not None:
            front_osc = [g.legs[leg.leg_id].leg_oscillation for leg in skeleton.legs if leg.kind == "front"]
            osc = sum(front_osc) / len(front_osc)
            offset = sternum_offset(ctx, g, osc)
            if offset != 0.0:
                translations[sternum_joint] = (0.0, 0.0, offset)

    return Pose(
        root_translation=(0.0, vertical, forward),
        rotations=rotations,
        translations=translations,
    )


def evaluate_frame_full(ctx: EvalContext, g: GaitParams, skeleton: Skeleton) -> FrameEvaluation:
    """Compose the full pose for one frame, with the per-leg report.

    Deterministic: identical inputs give bitwise-identical output. IK
    unreachability clamps and flags the leg instead of raising.
    """
    pose = _body_pose(ctx, g, skeleton)
    body_world = local_to_world(skeleton, pose)
    forward, _ = root_motion(ctx, g)

    rotations = dict(pose.rotations)
    foot_targets: dict[str, FootTarget] = {}
    leg_states: dict[str, LegPhaseState] = {}
    leg_reached: dict[str, bool] = {}
    global_phase = cyclic_time(ctx.tf, ctx.fps, g.motion_frequency)

    for chain in skeleton.legs:
        leg_id = chain.leg_id
        target = foot_target(ctx, g, leg_id, skeleton, forward)
        foot_targets[leg_id] = target
        leg_states[leg_id] = leg_phase(global_phase, g.legs[leg_id])

        parent = skeleton.joint(chain.joints[0]).parent
        parent_pos = body_world.position(parent)
        parent_orient = body_world.orientation(parent)
        root_pos = parent_pos + parent_orient @ np.asarray(skeleton.joint(chain.joints[0]).rest_offset)
        binding = binding_for_leg(skeleton, chain, parent_orient)

        # IK places the fetlock; the hoof segment keeps its rest world
        # orientation, so the fetlock goal is the foot goal minus the
        # rest hoof offset
        foot_offset = np.asarray(skeleton.joint(chain.joints[-1]).rest_offset)
        fetlock_goal = target.world_position - foot_offset
        pole = root_pos + WORLD_FORWARD

        if chain.kind == "front":
            upper = skeleton.segment_length(chain.joints[1])
            lower = skeleton.segment_length(chain.joints[2])
            sol = solve_two_bone(root_pos, fetlock_goal, upper, lower, pole, binding=binding)
        else:
            lengths = tuple(skeleton.segment_length(name) for name in chain.joints[1:-1])
            sol = solve_hind_leg(
                root_pos,
                fetlock_goal,
                lengths,
                pole,
                coupling_angle=_rest_coupling_angle(skeleton, chain),
                binding=binding,
            )
        rotations.update(sol.joint_rotations)
        # counter-rotate the fetlock so the hoof stays world-aligned
        rotations[chain.joints[-2]] = matrix_to_euler(sol.end_orientation.T)
        leg_reached[leg_id] = sol.reached

    final = Pose(
        root_translation=pose.root_translation,
        rotations=rotations,
        translations=pose.translations,
    )
    return FrameEvaluation(
        pose=final,
        foot_targets=foot_targets,
        leg_states=leg_states,
        leg_reached=leg_reached,
        fingerprint=params_fingerprint(g),
    )


def evaluate_frame(ctx: EvalContext, g: GaitParams, skeleton: Skeleton) -> Pose:
    return evaluate_frame_full(ctx, g, skeleton).pose


def footfall_events(
    g: GaitParams, skeleton: Skeleton, fps: float, samples_per_cycle: int = 160
) -> list[tuple[float, str]]:
    """(frame, leg) touch-down events over one cycle, by planted rising edges."""
    cycle_frames = fps / g.motion_frequency
    events: list[tuple[float, str]] = []
    previous: dict[str, bool] = {}
    for k in range(samples_per_cycle + 1):
        tf = cycle_frames * k / samples_per_cycle
        ev = evaluate_frame_full(EvalContext(tf, fps), g, skeleton)
        for leg_id in LEG_IDS:
            planted = ev.foot_targets[leg_id].planted
            if planted and previous.get(leg_id) is False:
                events.append((tf, leg_id))
            previous[leg_id] = planted
    return events
