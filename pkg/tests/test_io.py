import math

import numpy as np
import pytest

from quadgait.bvh import BvhParseError, read_bvh, write_bvh
from quadgait.clips import BakeError, FrameClip, bake, clip_to_json_dict
from quadgait.engine import EvalContext, evaluate_frame
from quadgait.gait import LEG_IDS, params_to_dict, preset
from quadgait.layers import AnimLayer, OverrideTrack
from quadgait.presets_io import (
    packaged_preset_path,
    read_layer,
    read_preset,
    write_layer,
    write_preset,
)
from quadgait.skeleton import Pose, build_quadruped_template

SKEL = build_quadruped_template()


def random_clip(rng, frame_count=5, fps=None):
    fps = fps if fps is not None else float(rng.uniform(12, 60))
    frames = []
    for _ in range(frame_count):
        rotations = {
            j.name: tuple(rng.uniform(-1.2, 1.2, 3)) for j in SKEL.joints if rng.random() < 0.8
        }
        frames.append(
            Pose(root_translation=tuple(rng.uniform(-3, 3, 3)), rotations=rotations)
        )
    return FrameClip(skeleton=SKEL, fps=fps, frames=tuple(frames))


class TestBake:
    def test_single_frame(self):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 1)
        assert len(clip.frames) == 1

    def test_zero_weight_layer_matches_no_layer(self):
        g = preset("walk").params
        layer = AnimLayer(tracks=(OverrideTrack("head", "rotX", ((0.0, 1.0),), weight=0.0),))
        a = bake(g, SKEL, None, 24.0, 4)
        b = bake(g, SKEL, layer, 24.0, 4)
        for pa, pb in zip(a.frames, b.frames):
            assert pa.rotations == pb.rotations
            assert pa.root_translation == pb.root_translation

    def test_one_cycle_wraps_to_periodic_extension(self):
        # amble at 24 fps, frequency 4 -> 6 frames per cycle; frame 0 of the
        # clip must match a direct frame-6 evaluation up to root travel
        g = preset("amble").params
        clip = bake(g, SKEL, None, 24.0, 6)
        direct = evaluate_frame(EvalContext(6.0, 24.0), g, SKEL)
        first = clip.frames[0]
        for joint in set(first.rotations) | set(direct.rotations):
            a = np.asarray(first.rotations.get(joint, (0.0, 0.0, 0.0)))
            b = np.asarray(direct.rotations.get(joint, (0.0, 0.0, 0.0)))
            assert np.allclose(a, b, atol=1e-9), joint
        assert np.allclose(
            np.asarray(direct.root_translation)[1],
            np.asarray(first.root_translation)[1],
            atol=1e-9,
        )

    def test_rejects_zero_frames(self):
        with pytest.raises(ValueError, match=">= 1"):
            bake(preset("walk").params, SKEL, None, 24.0, 0)

    def test_bake_error_carries_frame_index(self):
        layer = AnimLayer(tracks=(OverrideTrack("nonexistent", "rotX", ((0.0, 1.0),)),))
        with pytest.raises(BakeError, match="frame 0"):
            bake(preset("walk").params, SKEL, layer, 24.0, 2)

    def test_determinism(self):
        g = preset("trot").params
        a = bake(g, SKEL, None, 24.0, 8)
        b = bake(g, SKEL, None, 24.0, 8)
        for pa, pb in zip(a.frames, b.frames):
            assert pa.rotations == pb.rotations
            assert pa.translations == pb.translations
            assert pa.root_translation == pb.root_translation

    def test_json_dump_shape(self):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 3)
        doc = clip_to_json_dict(clip)
        assert doc["frame_count"] == 3
        assert len(doc["root_translation"]) == 3
        assert set(doc["rotations"]) == {j.name for j in SKEL.joints}
        assert all(len(v) == 3 for v in doc["rotations"].values())
        assert "sternum" in doc["translations"]


class TestBvh:
    def test_first_line_is_hierarchy(self, tmp_path):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 2)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        assert path.read_text().splitlines()[0] == "HIERARCHY"

    def test_frame_time_decimal_expansion(self, tmp_path):
        # 1/24 expands to 0.0416667
        clip = bake(preset("walk").params, SKEL, None, 24.0, 2)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        assert "Frame Time: 0.0416667\n" in path.read_text()

    def test_row_arity(self, tmp_path):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 2)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        lines = path.read_text().splitlines()
        start = lines.index("MOTION") + 3
        joint_count = len(SKEL.joints)
        for row in lines[start:]:
            assert len(row.split()) == 6 + 3 * (joint_count - 1)

    def test_frames_count_echo(self, tmp_path):
        clip = bake(preset("amble").params, SKEL, None, 24.0, 48)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        assert "Frames: 48" in path.read_text()

    def test_round_trip_20_random_clips(self, tmp_path):
        rng = np.random.default_rng(77)
        for i in range(20):
            clip = random_clip(rng)
            path = tmp_path / f"clip_{i}.bvh"
            write_bvh(clip, path)
            loaded = read_bvh(path)
            # structure identical
            assert {j.name for j in loaded.skeleton.joints} == {j.name for j in SKEL.joints}
            for j in loaded.skeleton.joints:
                original = SKEL.joint(j.name)
                assert j.parent == original.parent
                assert np.allclose(j.rest_offset, original.rest_offset, atol=1e-6)
            # channels within 1e-6
            assert abs(loaded.fps - clip.fps) / clip.fps < 1e-4
            for pa, pb in zip(clip.frames, loaded.frames):
                assert np.allclose(pa.root_translation, pb.root_translation, atol=1e-6)
                for name in {j.name for j in SKEL.joints}:
                    a = np.asarray(pa.rotations.get(name, (0.0, 0.0, 0.0)))
                    b = np.asarray(pb.rotations.get(name, (0.0, 0.0, 0.0)))
                    assert np.allclose(a, b, atol=1e-6)

    def test_empty_clip_rejected(self, tmp_path):
        clip = FrameClip(skeleton=SKEL, fps=24.0, frames=())
        with pytest.raises(ValueError, match="empty"):
            write_bvh(clip, tmp_path / "x.bvh")

    def test_missing_motion_section(self, tmp_path):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 1)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        text = path.read_text().split("MOTION")[0]
        broken = tmp_path / "broken.bvh"
        broken.write_text(text)
        with pytest.raises(BvhParseError, match="MOTION"):
            read_bvh(broken)

    def test_truncated_frame_row_reports_line(self, tmp_path):
        clip = bake(preset("walk").params, SKEL, None, 24.0, 2)
        path = tmp_path / "clip.bvh"
        write_bvh(clip, path)
        lines = path.read_text().splitlines()
        row = len(lines) - 1
        lines[row] = " ".join(lines[row].split()[:-1])
        broken = tmp_path / "broken.bvh"
        broken.write_text("\n".join(lines) + "\n")
        with pytest.raises(BvhParseError, match=f"line {row + 1}"):
            read_bvh(broken)

    def test_wrong_header_reports_line(self, tmp_path):
        bad = tmp_path / "bad.bvh"
        bad.write_text("NOT_A_BVH\n")
        with pytest.raises(BvhParseError, match="HIERARCHY"):
            read_bvh(bad)


class TestPresetFiles:
    def test_round_trip(self, tmp_path):
        for name in ("walk", "amble", "trot", "gallop"):
            p = preset(name)
            path = tmp_path / f"{name}.yaml"
            write_preset(p, path)
            loaded = read_preset(path)
            assert loaded.name == name
            assert params_to_dict(loaded.params) == params_to_dict(p.params)

    def test_shipped_amble_carries_canonical_values(self):
        loaded = read_preset(packaged_preset_path("amble"))
        assert loaded.params.motion_frequency == 4.0
        assert all(loaded.params.legs[leg].impact_duration == 3.0 for leg in LEG_IDS)
        phases = {leg: loaded.params.legs[leg].impact_phase for leg in LEG_IDS}
        assert phases == {"FR": 1.0, "FL": 5.0, "BR": 7.0, "BL": 3.0}

    def test_shipped_files_match_library(self):
        from quadgait.gait import preset_names

        for name in preset_names():
            loaded = read_preset(packaged_preset_path(name))
            assert params_to_dict(loaded.params) == params_to_dict(preset(name).params)

    def test_out_of_range_duration_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        write_preset(preset("walk"), path)
        text = path.read_text().replace("impact_duration: 5.0", "impact_duration: 9.0")
        text = text.replace("swing_duration: 3.0", "swing_duration: -1.0")
        path.write_text(text)
        with pytest.raises(ValueError, match="impact_duration"):
            read_preset(path)

    def test_unknown_field_named(self, tmp_path):
        path = tmp_path / "bad.yaml"
        write_preset(preset("walk"), path)
        path.write_text(path.read_text().replace("bounce:", "sproing:"))
        with pytest.raises(ValueError, match="sproing"):
            read_preset(path)

    def test_missing_field_named(self, tmp_path):
        path = tmp_path / "bad.yaml"
        write_preset(preset("walk"), path)
        lines = [l for l in path.read_text().splitlines() if not l.startswith("  bounce:")]
        path.write_text("\n".join(lines))
        with pytest.raises(ValueError, match="bounce"):
            read_preset(path)

    def test_bad_version_rejected(self, tmp_path):
        path = tmp_path / "bad.yaml"
        write_preset(preset("walk"), path)
        path.write_text(path.read_text().replace("format_version: 1", "format_version: 99"))
        with pytest.raises(ValueError, match="format_version"):
            read_preset(path)


class TestLayerFiles:
    def test_round_trip(self, tmp_path):
        layer = AnimLayer(
            tracks=(
                OverrideTrack("head", "rotX", ((0.0, 0.2), (10.0, -0.1)), mode="replace", weight=0.7),
                OverrideTrack("pelvis", "transY", ((4.0, 0.05),)),
            )
        )
        path = tmp_path / "layer.yaml"
        write_layer(layer, path)
        loaded = read_layer(path)
        assert loaded == layer

    def test_unknown_track_field(self, tmp_path):
        path = tmp_path / "layer.yaml"
        write_layer(AnimLayer(tracks=(OverrideTrack("head", "rotX", ((0.0, 1.0),)),)), path)
        path.write_text(path.read_text().replace("weight:", "strength:"))
        with pytest.raises(ValueError, match="strength"):
            read_layer(path)

    def test_invalid_channel_rejected(self, tmp_path):
        path = tmp_path / "layer.yaml"
        write_layer(AnimLayer(tracks=(OverrideTrack("head", "rotX", ((0.0, 1.0),)),)), path)
        path.write_text(path.read_text().replace("rotX", "rotQ"))
        with pytest.raises(ValueError, match="rotQ"):
            read_layer(path)


class TestTemplateFiles:
    def test_round_trip(self, tmp_path):
        from quadgait.presets_io import read_template, write_template
        from quadgait.skeleton import TemplateConfig

        config = TemplateConfig(spine_joints=4, front_upper=0.5, hock_angle=2.3)
        path = tmp_path / "horse.yaml"
        write_template(config, path)
        loaded = read_template(path)
        assert loaded.spine_joints == 4
        assert loaded.front_upper == 0.5
        assert loaded.hock_angle == 2.3
        assert loaded.neck_joints == config.neck_joints  # defaulted

    def test_builds_a_valid_skeleton(self, tmp_path):
        from quadgait.presets_io import read_template, write_template
        from quadgait.skeleton import TemplateConfig, build_quadruped_template, validate

        path = tmp_path / "t.yaml"
        write_template(TemplateConfig(spine_joints=3, tail_joints=4), path)
        skel = build_quadruped_template(read_template(path))
        assert len(skel.chains["spine"]) == 3
        assert validate(skel) == []

    def test_unknown_field_named(self, tmp_path):
        from quadgait.presets_io import read_template, write_template
        from quadgait.skeleton import TemplateConfig

        path = tmp_path / "t.yaml"
        write_template(TemplateConfig(), path)
        path.write_text(path.read_text().replace("hip_spread:", "hip_width:"))
        with pytest.raises(ValueError, match="hip_width"):
            read_template(path)
