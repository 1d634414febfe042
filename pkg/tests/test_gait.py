import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quadgait.gait import (
    LEG_IDS,
    STANCE,
    SWING,
    GaitParams,
    LegParams,
    blend_params,
    circular_phase_blend,
    cyclic_time,
    footfall_order,
    frames_per_cycle,
    grounded_count,
    leg_phase,
    params_fingerprint,
    params_from_dict,
    params_to_dict,
    preset,
    preset_names,
)


def circular_blend_oracle(a, b, t, n=80000):
    """Brute-force oracle: enumerate both arcs of the 8-unit circle on a
    dense grid, pick the shorter (ties go increasing), walk fraction t."""
    step = 8.0 / n
    inc = next(k * step for k in range(n + 1) if abs((a + k * step) % 8.0 - b) < step)
    dec = next(k * step for k in range(n + 1) if abs((a - k * step) % 8.0 - b) < step)
    if inc <= dec:
        return (a + t * inc) % 8.0
    return (a - t * dec) % 8.0


class TestCyclicTime:
    def test_start_of_cycle(self):
        assert cyclic_time(0, 24, 1.0) == 0.0

    def test_full_wrap(self):
        assert cyclic_time(24, 24, 1.0) == 0.0

    def test_hand_checked_value(self):
        # (3/24) * 4 = 0.5
        assert cyclic_time(3, 24, 4.0) == pytest.approx(0.5, abs=1e-15)

    def test_rejects_bad_rates(self):
        with pytest.raises(ValueError):
            cyclic_time(0, 0, 1.0)
        with pytest.raises(ValueError):
            cyclic_time(0, 24, 0.0)
        with pytest.raises(ValueError):
            cyclic_time(-1, 24, 1.0)

    def test_periodic_at_integer_frame_counts(self):
        for mf in (1.0, 2.0, 4.0):
            n = frames_per_cycle(24, mf)
            assert n == int(n)
            for tf in (0, 5, 17, 100):
                a = cyclic_time(tf, 24, mf)
                b = cyclic_time(tf + n, 24, mf)
                assert min(abs(a - b), 1.0 - abs(a - b)) < 1e-9


class TestLegPhase:
    def test_amble_front_right_stance_third(self):
        # hand enumeration: window [1, 4), abs phase 2.0 -> progress 1/3
        leg = LegParams(impact_phase=1.0, impact_duration=3.0)
        state = leg_phase(0.25, leg)
        assert state.mode == STANCE
        assert state.progress == pytest.approx(1.0 / 3.0, abs=1e-12)
        assert state.absolute_phase == pytest.approx(2.0)

    def test_window_start(self):
        leg = LegParams(impact_phase=1.0, impact_duration=3.0)
        state = leg_phase(0.125, leg)
        assert state.mode == STANCE
        assert state.progress == 0.0

    def test_window_end_is_swing_start(self):
        leg = LegParams(impact_phase=1.0, impact_duration=3.0)
        state = leg_phase(0.5, leg)
        assert state.mode == SWING
        assert state.progress == 0.0

    def test_wrapping_window(self):
        leg = LegParams(impact_phase=7.0, impact_duration=3.0)  # [7, 10) wraps
        assert leg_phase(0.9375, leg).mode == STANCE  # abs 7.5
        assert leg_phase(0.125, leg).mode == STANCE  # abs 1.0
        assert leg_phase(0.25, leg).mode == SWING  # abs 2.0

    def test_rejects_out_of_range_phase(self):
        with pytest.raises(ValueError):
            leg_phase(1.0, LegParams())

    @given(
        st.floats(0.0, 0.999999),
        st.floats(0.0, 7.999),
        st.floats(0.01, 7.99),
    )
    @settings(max_examples=300)
    def test_exactly_one_mode_and_progress_range(self, phase, ip, dur):
        state = leg_phase(phase, LegParams(impact_phase=ip, impact_duration=dur))
        assert state.mode in (STANCE, SWING)
        assert 0.0 <= state.progress < 1.0 + 1e-12

    def test_stance_measure_matches_duty_factor(self):
        for dur in (1.0, 3.0, 5.0, 6.5):
            leg = LegParams(impact_phase=2.5, impact_duration=dur)
            n = 10000
            grounded = sum(
                1 for k in range(n) if leg_phase(k / n, leg).mode == STANCE
            )
            assert abs(grounded / n - dur / 8.0) < 1e-3


class TestFootfallOrder:
    def test_amble_order(self):
        assert footfall_order(preset("amble").params) == ["FR", "BL", "FL", "BR"]

    def test_tie_break(self):
        params = GaitParams(legs={leg: LegParams(impact_phase=2.0) for leg in LEG_IDS})
        assert footfall_order(params) == ["FR", "FL", "BR", "BL"]

    def test_already_sorted(self):
        phases = dict(zip(LEG_IDS, (0.0, 2.0, 4.0, 6.0)))
        params = GaitParams(
            legs={leg: LegParams(impact_phase=phases[leg]) for leg in LEG_IDS}
        )
        assert footfall_order(params) == ["FR", "FL", "BR", "BL"]

    def test_invariant_under_cycle_rotation(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            phases = rng.uniform(0, 8, 4)
            if len(set(np.round(phases, 6))) < 4:
                continue
            shift = rng.uniform(0, 8)
            base = GaitParams(
                legs={leg: LegParams(impact_phase=p) for leg, p in zip(LEG_IDS, phases)}
            )
            rotated = GaitParams(
                legs={
                    leg: LegParams(impact_phase=(p + shift) % 8.0)
                    for leg, p in zip(LEG_IDS, phases)
                }
            )
            a = footfall_order(base)
            b = footfall_order(rotated)
            assert b in [a[i:] + a[:i] for i in range(4)]


class TestPresets:
    def test_amble_carries_canonical_values(self):
        p = preset("amble").params
        assert p.motion_frequency == 4.0
        assert all(p.legs[leg].impact_duration == 3.0 for leg in LEG_IDS)
        assert p.legs["FR"].impact_phase == 1.0
        assert p.legs["FL"].impact_phase == 5.0
        assert p.legs["BR"].impact_phase == 7.0
        assert p.legs["BL"].impact_phase == 3.0

    def test_walk_is_a_true_walk(self):
        # duty factor must exceed 0.5 and at least two feet stay grounded;
        # oracle: minimum grounded-foot count over a densely sampled cycle
        p = preset("walk").params
        assert all(p.legs[leg].impact_duration > 4.0 for leg in LEG_IDS)
        counts = [grounded_count(p, k / 10000) for k in range(10000)]
        assert min(counts) == 2

    def test_walk_is_lateral_sequence(self):
        assert footfall_order(preset("walk").params) == ["BL", "FL", "BR", "FR"]

    def test_unknown_preset_lists_library(self):
        with pytest.raises(KeyError) as err:
            preset("nonsense")
        for name in ("walk", "amble", "trot", "gallop"):
            assert name in str(err.value)

    def test_copies_do_not_alias_library(self):
        a = preset("amble")
        a.params.legs["FR"].impact_phase = 0.5
        a.params.motion_frequency = 9.0
        b = preset("amble")
        assert b.params.legs["FR"].impact_phase == 1.0
        assert b.params.motion_frequency == 4.0

    def test_names(self):
        assert set(preset_names()) == {"walk", "amble", "trot", "gallop"}


class TestBlend:
    def test_endpoints_exact(self):
        a = preset("walk").params
        b = preset("amble").params
        assert params_to_dict(blend_params(a, b, 0.0)) == params_to_dict(a)
        assert params_to_dict(blend_params(a, b, 1.0)) == params_to_dict(b)

    def test_wrap_aware_midpoint(self):
        # oracle: dense grid enumeration of both arcs (0.0 and 8.0 coincide)
        oracle = circular_blend_oracle(7.0, 1.0, 0.5)
        assert min(oracle, 8.0 - oracle) < 1e-3
        assert circular_phase_blend(7.0, 1.0, 0.5) == pytest.approx(0.0, abs=1e-12)

    def test_against_grid_oracle(self):
        rng = np.random.default_rng(9)
        for _ in range(40):
            a, b = rng.uniform(0, 8, 2)
            t = rng.uniform(0, 1)
            got = circular_phase_blend(a, b, t)
            want = circular_blend_oracle(a, b, t)
            diff = abs(got - want)
            assert min(diff, 8.0 - diff) < 2e-3

    def test_tie_goes_increasing(self):
        assert circular_phase_blend(1.0, 5.0, 0.25) == pytest.approx(2.0, abs=1e-12)
        assert circular_phase_blend(6.0, 2.0, 0.25) == pytest.approx(7.0, abs=1e-12)

    @given(st.floats(0.0, 1.0))
    @settings(max_examples=100)
    def test_blend_of_identical_params_is_identity(self, t):
        a = preset("trot").params
        blended = blend_params(a, a, t)
        assert params_to_dict(blended) == params_to_dict(a)

    def test_rejects_out_of_range_t(self):
        a = preset("walk").params
        with pytest.raises(ValueError):
            blend_params(a, a, 1.5)
        with pytest.raises(ValueError):
            blend_params(a, a, -0.1)

    def test_duration_stays_in_open_interval(self):
        a = GaitParams(legs={leg: LegParams(impact_duration=0.01) for leg in LEG_IDS})
        b = GaitParams(legs={leg: LegParams(impact_duration=7.99) for leg in LEG_IDS})
        for t in (0.0, 0.3, 0.7, 1.0):
            blended = blend_params(a, b, t)
            for leg in LEG_IDS:
                assert 0.0 < blended.legs[leg].impact_duration < 8.0


class TestParamsDict:
    def test_round_trip(self):
        p = preset("gallop").params
        assert params_to_dict(params_from_dict(params_to_dict(p))) == params_to_dict(p)

    def test_unknown_field_named(self):
        doc = params_to_dict(preset("walk").params)
        doc["gravity"] = 9.8
        with pytest.raises(ValueError, match="gravity"):
            params_from_dict(doc)

    def test_missing_field_named(self):
        doc = params_to_dict(preset("walk").params)
        del doc["bounce"]
        with pytest.raises(ValueError, match="bounce"):
            params_from_dict(doc)

    def test_invariant_violation_surfaces(self):
        doc = params_to_dict(preset("walk").params)
        doc["legs"]["FR"]["impact_duration"] = 9.0
        del doc["legs"]["FR"]["swing_duration"]
        with pytest.raises(ValueError, match="impact_duration"):
            params_from_dict(doc)

    def test_inconsistent_swing_duration_rejected(self):
        doc = params_to_dict(preset("walk").params)
        doc["legs"]["FR"]["swing_duration"] = 1.0
        with pytest.raises(ValueError, match="swing_duration"):
            params_from_dict(doc)

    def test_fingerprint_tracks_content(self):
        a = preset("walk").params
        b = preset("walk").params
        assert params_fingerprint(a) == params_fingerprint(b)
        b.bounce += 0.001
        assert params_fingerprint(a) != params_fingerprint(b)


class TestInvariantValidation:
    def test_leg_params_ranges(self):
        with pytest.raises(ValueError):
            LegParams(impact_phase=8.0)
        with pytest.raises(ValueError):
            LegParams(impact_duration=0.0)
        with pytest.raises(ValueError):
            LegParams(impact_duration=8.0)

    def test_swing_duration_complements(self):
        leg = LegParams(impact_duration=3.0)
        assert leg.swing_duration + leg.impact_duration == 8.0

    def test_gait_params_ranges(self):
        with pytest.raises(ValueError):
            GaitParams(motion_frequency=0.0)
        with pytest.raises(ValueError):
            GaitParams(counter_gait_error=0.0)
        with pytest.raises(ValueError):
            GaitParams(bounce=-0.1)
        with pytest.raises(ValueError):
            GaitParams(legs={"FR": LegParams()})
