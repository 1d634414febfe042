import math

import numpy as np
import pytest

from quadgait.engine import EvalContext, evaluate_frame
from quadgait.gait import preset
from quadgait.layers import AnimLayer, OverrideTrack, apply_layer, sample_track
from quadgait.skeleton import build_quadruped_template

SKEL = build_quadruped_template()


def base_pose(tf=7.0):
    return evaluate_frame(EvalContext(tf, 24), preset("walk").params, SKEL)


def random_layer(rng, joints, n_tracks=4):
    channels = ("rotX", "rotY", "rotZ", "transX", "transY", "transZ")
    slots = set()
    tracks = []
    while len(tracks) < n_tracks:
        joint = joints[rng.integers(len(joints))]
        channel = channels[rng.integers(len(channels))]
        if (joint, channel) in slots:
            continue
        slots.add((joint, channel))
        frames = np.sort(rng.uniform(0, 48, rng.integers(1, 5)))
        frames = np.unique(frames)
        keys = tuple((float(f), float(rng.uniform(-1, 1))) for f in frames)
        tracks.append(
            OverrideTrack(
                joint=joint,
                channel=channel,
                keys=keys,
                mode="additive" if rng.random() < 0.5 else "replace",
                weight=float(rng.uniform(0, 1)),
            )
        )
    return AnimLayer(tracks=tuple(tracks))


class TestSampleTrack:
    def test_linear_midpoint(self):
        track = OverrideTrack("head", "rotX", ((0.0, 0.0), (10.0, 10.0)))
        assert sample_track(track, 5.0) == 5.0

    def test_constant_extrapolation(self):
        track = OverrideTrack("head", "rotX", ((0.0, 0.0), (10.0, 10.0)))
        assert sample_track(track, -5.0) == 0.0
        assert sample_track(track, 50.0) == 10.0

    def test_single_key_is_constant(self):
        track = OverrideTrack("head", "rotX", ((3.0, 7.0),))
        for tf in (-10.0, 0.0, 3.0, 99.0):
            assert sample_track(track, tf) == 7.0

    def test_empty_track_rejected(self):
        track = OverrideTrack("head", "rotX", ())
        with pytest.raises(ValueError, match="no keys"):
            sample_track(track, 0.0)

    def test_non_increasing_keys_rejected(self):
        with pytest.raises(ValueError, match="strictly increase"):
            OverrideTrack("head", "rotX", ((1.0, 0.0), (1.0, 2.0)))


class TestApplyLayer:
    def test_zero_weight_is_bitwise_identity(self):
        base = base_pose()
        layer = AnimLayer(
            tracks=(OverrideTrack("head", "rotX", ((0.0, 1.0),), weight=0.0),)
        )
        out = apply_layer(base, layer, 3.0, SKEL)
        assert out.rotations == base.rotations
        assert out.translations == base.translations
        assert out.root_translation == base.root_translation

    def test_disabled_layer_is_identity(self):
        base = base_pose()
        layer = AnimLayer(
            tracks=(OverrideTrack("head", "rotX", ((0.0, 1.0),)),), enabled=False
        )
        assert apply_layer(base, layer, 3.0, SKEL) is base

    def test_replace_full_weight_sets_channel_and_isolates(self):
        base = base_pose()
        layer = AnimLayer(
            tracks=(OverrideTrack("neck_2", "rotY", ((0.0, 0.42),), mode="replace", weight=1.0),)
        )
        out = apply_layer(base, layer, 0.0, SKEL)
        assert out.rotations["neck_2"][1] == 0.42
        assert out.rotations["neck_2"][0] == base.rotations["neck_2"][0]
        assert out.rotations["neck_2"][2] == base.rotations["neck_2"][2]
        for joint, euler in base.rotations.items():
            if joint != "neck_2":
                assert out.rotations[joint] == euler

    def test_additive_blend_arithmetic(self):
        # 20 degrees base + 0.5 * 10 degrees -> 25 degrees, in radians
        base_val = math.radians(20.0)
        base = base_pose()
        rot = dict(base.rotations)
        rot["head"] = (base_val, 0.0, 0.0)
        base = type(base)(base.root_translation, rot, base.translations)
        layer = AnimLayer(
            tracks=(
                OverrideTrack("head", "rotX", ((0.0, math.radians(10.0)),), weight=0.5),
            )
        )
        out = apply_layer(base, layer, 0.0, SKEL)
        assert out.rotations["head"][0] == pytest.approx(math.radians(25.0), abs=1e-15)

    def test_translation_channel(self):
        base = base_pose()
        layer = AnimLayer(
            tracks=(OverrideTrack("pelvis", "transY", ((0.0, 0.3),), weight=1.0),)
        )
        out = apply_layer(base, layer, 0.0, SKEL)
        assert out.translations["pelvis"][1] == pytest.approx(0.3)
        assert out.root_translation == base.root_translation

    def test_unknown_joint_named(self):
        base = base_pose()
        layer = AnimLayer(tracks=(OverrideTrack("antlers", "rotX", ((0.0, 1.0),)),))
        with pytest.raises(ValueError, match="antlers"):
            apply_layer(base, layer, 0.0, SKEL)

    def test_replace_weight_one_idempotent(self):
        base = base_pose()
        layer = AnimLayer(
            tracks=(
                OverrideTrack("spine_3", "rotZ", ((0.0, 0.2), (10.0, -0.2)), mode="replace", weight=1.0),
            )
        )
        once = apply_layer(base, layer, 4.0, SKEL)
        twice = apply_layer(once, layer, 4.0, SKEL)
        assert once.rotations == twice.rotations
        assert once.translations == twice.translations

    def test_locality_on_random_layers(self):
        rng = np.random.default_rng(41)
        joints = [j.name for j in SKEL.joints]
        base = base_pose()
        for _ in range(100):
            layer = random_layer(rng, joints)
            touched = {t.joint for t in layer.tracks}
            out = apply_layer(base, layer, float(rng.uniform(0, 48)), SKEL)
            for joint in joints:
                if joint in touched:
                    continue
                assert out.rotations.get(joint) == base.rotations.get(joint)
                assert out.translations.get(joint) == base.translations.get(joint)

    def test_duplicate_slot_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            AnimLayer(
                tracks=(
                    OverrideTrack("head", "rotX", ((0.0, 1.0),)),
                    OverrideTrack("head", "rotX", ((5.0, 2.0),)),
                )
            )

    def test_weight_range_enforced(self):
        with pytest.raises(ValueError, match="weight"):
            OverrideTrack("head", "rotX", ((0.0, 1.0),), weight=1.5)
