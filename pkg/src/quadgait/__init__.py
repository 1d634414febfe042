"""quadgait: procedural quadruped gait synthesis and export.

A trigonometric motion model drives a quadruped skeleton through cyclic
gaits (walk, amble, trot, gallop), with analytic leg IK, a user override
layer, BVH/JSON export, and an HTTP service for live tuning.
"""

from .clips import FrameClip, bake
from .engine import EvalContext, FootTarget, evaluate_frame, evaluate_frame_full
from .gait import (
    GaitParams,
    GaitPreset,
    LegParams,
    LegPhaseState,
    blend_params,
    cyclic_time,
    footfall_order,
    leg_phase,
    preset,
    preset_names,
)
from .ik import IkSolution, chain_wave, solve_hind_leg, solve_two_bone
from .layers import AnimLayer, OverrideTrack, apply_layer, sample_track
from .skeleton import (
    Joint,
    LegChain,
    Pose,
    Skeleton,
    TemplateConfig,
    WorldPose,
    build_quadruped_template,
    local_to_world,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "AnimLayer",
    "EvalContext",
    "FootTarget",
    "FrameClip",
    "GaitParams",
    "GaitPreset",
    "IkSolution",
    "Joint",
    "LegChain",
    "LegParams",
    "LegPhaseState",
    "OverrideTrack",
    "Pose",
    "Skeleton",
    "TemplateConfig",
    "WorldPose",
    "apply_layer",
    "bake",
    "blend_params",
    "build_quadruped_template",
    "chain_wave",
    "cyclic_time",
    "evaluate_frame",
    "evaluate_frame_full",
    "footfall_order",
    "leg_phase",
    "local_to_world",
    "preset",
    "preset_names",
    "sample_track",
    "solve_hind_leg",
    "solve_two_bone",
    "validate",
]
