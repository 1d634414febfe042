"""User override layer: keyable channel tracks blended over the base pose.

Tracks address one (joint, channel) pair; rotation channels index the
(rx, ry, rz) Euler triple, translation channels the per-joint offset.
Additive adds weight * sample to the base channel; Replace mixes toward
the sampled value by weight. Interpolation between keys is linear with
constant extrapolation outside the key range.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .skeleton import Pose, Skeleton

ADDITIVE = "additive"
REPLACE = "replace"

ROTATION_CHANNELS = ("rotX", "rotY", "rotZ")
TRANSLATION_CHANNELS = ("transX", "transY", "transZ")
CHANNELS = ROTATION_CHANNELS + TRANSLATION_CHANNELS

_AXIS_INDEX = {"X": 0, "Y": 1, "Z": 2}


@dataclass(frozen=True)
class OverrideTrack:
    joint: str
    channel: str
    keys: tuple[tuple[float, float], ...]
    mode: str = ADDITIVE
    weight: float = 1.0

    def __post_init__(self):
        if self.channel not in CHANNELS:
            raise ValueError(f"unknown channel '{self.channel}'; expected one of {CHANNELS}")
        if self.mode not in (ADDITIVE, REPLACE):
            raise ValueError(f"unknown mode '{self.mode}'")
        if not 0.0 <= self.weight <= 1.0:
            raise ValueError(f"weight must be in [0, 1], got {self.weight}")
        frames = [frame for frame, _ in self.keys]
        if any(b <= a for a, b in zip(frames, frames[1:])):
            raise ValueError(f"track {self.joint}.{self.channel}: keys must strictly increase")


@dataclass(frozen=True)
class AnimLayer:
    tracks: tuple[OverrideTrack, ...] = ()
    enabled: bool = True

    def __post_init__(self):
        seen: set[tuple[str, str]] = set()
        for track in self.tracks:
            slot = (track.joint, track.channel)
            if slot in seen:
                raise ValueError(f"duplicate track for {track.joint}.{track.channel}")
            seen.add(slot)


def sample_track(track: OverrideTrack, tf: float) -> float:
    """Linear interpolation between bracketing keys, constant outside."""
    if not track.keys:
        raise ValueError(f"track {track.joint}.{track.channel} has no keys")
    frames = [frame for frame, _ in track.keys]
    values = [value for _, value in track.keys]
    return float(np.interp(tf, frames, values))


def apply_layer(base: Pose, layer: AnimLayer, tf: float, skeleton: Skeleton) -> Pose:
    """Blend the layer into the base pose at frame tf.

    Untouched channels pass through bitwise; a disabled or zero-weight
    layer returns the base unchanged.
    """
    if not layer.enabled:
        return base
    active = [t for t in layer.tracks if t.weight != 0.0]
    if not active:
        return base

    rotations = dict(base.rotations)
    translations = dict(base.translations)
    for track in active:
        if not skeleton.has_joint(track.joint):
            raise ValueError(f"layer track references unknown joint '{track.joint}'")
        sample = sample_track(track, tf)
        axis = _AXIS_INDEX[track.channel[-1]]
        store = rotations if track.channel in ROTATION_CHANNELS else translations
        channels = list(store.get(track.joint, (0.0, 0.0, 0.0)))
        if track.mode == ADDITIVE:
            channels[axis] = channels[axis] + track.weight * sample
        else:
            channels[axis] = (1.0 - track.weight) * channels[axis] + track.weight * sample
        store[track.joint] = tuple(channels)

    return Pose(
        root_translation=base.root_translation,
        rotations=rotations,
        translations=translations,
    )
