"""Frame clips: baking gait + layer into pose sequences, JSON dumps."""

from __future__ import annotations

from dataclasses import dataclass

from .engine import EvalContext, evaluate_frame_full
from .gait import GaitParams
from .layers import AnimLayer, apply_layer
from .skeleton import Pose, Skeleton


@dataclass(frozen=True)
class FrameClip:
    skeleton: Skeleton
    fps: float
    frames: tuple[Pose, ...]

    def __post_init__(self):
        if self.fps <= 0.0:
            raise ValueError(f"fps must be > 0, got {self.fps}")


class BakeError(RuntimeError):
    """Evaluation failure wrapped with the offending frame index."""


def bake(
    g: GaitParams,
    skeleton: Skeleton,
    layer: AnimLayer | None,
    fps: float,
    frame_count: int,
) -> FrameClip:
    """Evaluate frames 0..frame_count-1 and apply the override layer."""
    if frame_count < 1:
        raise ValueError("frames must be >= 1")
    frames: list[Pose] = []
    for tf in range(frame_count):
        try:
            pose = evaluate_frame_full(EvalContext(float(tf), fps), g, skeleton).pose
            if layer is not None:
                pose = apply_layer(pose, layer, float(tf), skeleton)
        except (ValueError, KeyError) as err:
            raise BakeError(f"frame {tf}: {err}") from err
        frames.append(pose)
    return FrameClip(skeleton=skeleton, fps=fps, frames=tuple(frames))


def clip_to_json_dict(clip: FrameClip) -> dict:
    """Joint-name -> channel-array dump consumed by the studio UI."""
    joint_names = [j.name for j in clip.skeleton.joints]
    translated = sorted({name for pose in clip.frames for name in pose.translations})
    return {
        "fps": clip.fps,
        "frame_count": len(clip.frames),
        "joint_names": joint_names,
        "root_translation": [list(pose.root_translation) for pose in clip.frames],
        "rotations": {
            name: [list(pose.rotations.get(name, (0.0, 0.0, 0.0))) for pose in clip.frames]
            for name in joint_names
        },
        "translations": {
            name: [list(pose.translations.get(name, (0.0, 0.0, 0.0))) for pose in clip.frames]
            for name in translated
        },
    }
