"""Recognizer behavior: taps, holds, lassos, filtering, determinism."""

from __future__ import annotations

import json
import random

import pytest

from corpus import (
    double_tap_script,
    exploratory_scan_script,
    hold_pair_script,
    hold_script,
    lasso_script,
)
from tactmap.gestures import (
    GestureConfig,
    GestureKind,
    InvalidConfig,
    OutOfOrderTimestamp,
    Recognizer,
    TouchPhase,
    TouchSample,
    UnknownTouchId,
    new_recognizer,
)
from tactmap.geometry import dist, polyline_length


def feed_all(recognizer, samples):
    events = []
    for s in samples:
        events.extend(recognizer.feed_sample(s))
    return events


def tap(recognizer, p, t_down, t_up, touch_id=1):
    events = recognizer.feed_sample(TouchSample(TouchPhase.DOWN, touch_id, p[0], p[1], t_down))
    events += recognizer.feed_sample(TouchSample(TouchPhase.UP, touch_id, p[0], p[1], t_up))
    return events


class TestConfig:
    def test_defaults_accepted(self):
        r = new_recognizer()
        assert r.live_contacts == 0

    def test_tap_window_must_precede_hold(self):
        with pytest.raises(InvalidConfig):
            new_recognizer(GestureConfig(tap_max_duration_ms=2000, hold_min_duration_ms=1000))

    def test_custom_hold_duration(self):
        r = new_recognizer(GestureConfig(hold_min_duration_ms=600))
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 50, 50, 0))
        assert [e.kind for e in r.advance_time(600)] == [GestureKind.HOLD_ACTIVATE]

    def test_nonpositive_threshold_rejected(self):
        with pytest.raises(InvalidConfig):
            new_recognizer(GestureConfig(tap_max_drift_mm=0))


class TestDoubleTap:
    def test_example_timing(self):
        r = new_recognizer()
        assert tap(r, (50, 50), 0, 100) == []
        events = tap(r, (50, 50), 250, 330, touch_id=2)
        assert len(events) == 1
        event = events[0]
        assert event.kind == GestureKind.DOUBLE_TAP
        assert event.point == (50.0, 50.0)
        assert event.t_ms == 330

    def test_single_tap_is_inert_forever(self):
        r = new_recognizer()
        assert tap(r, (80, 90), 0, 100) == []
        assert r.advance_time(10_000) == []

    def test_interval_measured_up_to_down(self):
        r = new_recognizer()
        tap(r, (50, 50), 0, 240)
        # down at 240+400 is exactly on the window edge
        assert tap(r, (50, 50), 640, 700, touch_id=2) != []
        r.reset()
        tap(r, (50, 50), 0, 240)
        assert tap(r, (50, 50), 641, 700, touch_id=2) == []

    def test_gap_constraint(self):
        r = new_recognizer()
        tap(r, (50, 50), 0, 100)
        assert tap(r, (58, 50), 200, 280, touch_id=2) == []  # 8 mm apart
        # but the failed second tap becomes the new pending tap
        events = tap(r, (58, 50), 400, 470, touch_id=3)
        assert [e.kind for e in events] == [GestureKind.DOUBLE_TAP]

    def test_slow_press_is_not_a_tap(self):
        r = new_recognizer()
        tap(r, (50, 50), 0, 100)
        assert tap(r, (50, 50), 200, 460, touch_id=2) == []  # 260 ms press

    def test_centroid_of_differing_downs(self):
        r = new_recognizer()
        tap(r, (50, 50), 0, 100)
        (event,) = tap(r, (54, 52), 200, 280, touch_id=2)
        assert event.point == (52.0, 51.0)


class TestHold:
    def test_activation_on_advance_time_boundary(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 30, 30, 0))
        events = r.advance_time(1000)
        assert [e.kind for e in events] == [GestureKind.HOLD_ACTIVATE]
        assert events[0].t_ms == 1000
        assert events[0].point == (30.0, 30.0)
        assert events[0].touch_id == 1

    def test_drift_kills_hold(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 30, 30, 0))
        r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 35, 30, 500))  # 5 mm > 4 mm
        assert r.advance_time(2000) == []

    def test_activation_idempotent(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 30, 30, 0))
        assert len(r.advance_time(1000)) == 1
        assert r.advance_time(1500) == []
        assert r.advance_time(2000) == []

    def test_sample_crossing_threshold_fires_before_movement(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 30, 30, 0))
        # first sample past the threshold is a big move; activation still
        # happened at 1000 while the finger was in place
        events = r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 60, 30, 1200))
        assert [e.kind for e in events] == [GestureKind.HOLD_ACTIVATE]
        assert events[0].t_ms == 1000

    def test_release_event_after_activation(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 30, 30, 0))
        r.advance_time(1000)
        events = r.feed_sample(TouchSample(TouchPhase.UP, 1, 30, 30, 1500))
        assert [e.kind for e in events] == [GestureKind.HOLD_RELEASE]
        assert events[0].touch_id == 1

    def test_held_contact_never_lassos(self):
        rng = random.Random(0)
        r = new_recognizer()
        samples, _ = lasso_script(rng, t0=0)
        # pin the contact long enough to activate the hold first
        r.feed_sample(TouchSample(TouchPhase.DOWN, 9, 200, 150, 0))
        r.advance_time(1200)
        events = r.feed_sample(TouchSample(TouchPhase.UP, 9, 200, 150, 1300))
        assert [e.kind for e in events] == [GestureKind.HOLD_RELEASE]


class TestLasso:
    def test_circular_path_recognized(self):
        rng = random.Random(1)
        samples, points = lasso_script(rng, t0=0, center=(200, 150), radius=15.0)
        r = new_recognizer()
        events = feed_all(r, samples)
        assert [e.kind for e in events] == [GestureKind.LASSO]
        path = events[0].path
        assert polyline_length(path) >= 25.0
        assert dist(path[0], path[-1]) <= 10.0
        assert polyline_length(path) == pytest.approx(polyline_length(tuple(points)))

    def test_open_drag_emits_nothing(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 50, 50, 0))
        for i in range(1, 21):
            r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 50 + 6 * i, 50, i * 100))
        events = r.feed_sample(TouchSample(TouchPhase.UP, 1, 170, 50, 2000))
        assert events == []

    def test_tiny_loop_fails_perimeter(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 50, 50, 0))
        for i, (dx, dy) in enumerate([(3, 0), (3, 3), (0, 3), (0, 0)], start=1):
            r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 50 + dx, 50 + dy, 300 + i * 50))
        events = r.feed_sample(TouchSample(TouchPhase.UP, 1, 50, 50, 600))
        assert events == []

    def test_soundness_bounds_hold_for_all_emissions(self):
        rng = random.Random(2)
        config = GestureConfig()
        for _ in range(100):
            samples, _ = lasso_script(rng)
            r = new_recognizer(config)
            for event in feed_all(r, samples):
                if event.kind == GestureKind.LASSO:
                    assert polyline_length(event.path) >= config.lasso_min_perimeter_mm
                    assert dist(event.path[0], event.path[-1]) <= config.lasso_closure_eps_mm


class TestErrorsAndReset:
    def test_out_of_order_rejected(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 10, 10, 100))
        with pytest.raises(OutOfOrderTimestamp):
            r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 10, 10, 99))

    def test_unknown_touch_id(self):
        r = new_recognizer()
        with pytest.raises(UnknownTouchId):
            r.feed_sample(TouchSample(TouchPhase.MOVE, 5, 10, 10, 0))

    def test_rejected_sample_leaves_state_intact(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 10, 10, 0))
        with pytest.raises(UnknownTouchId):
            r.feed_sample(TouchSample(TouchPhase.UP, 2, 10, 10, 1500))
        # the hold for contact 1 still fires: the bad sample did not advance anything
        events = r.advance_time(1500)
        assert [e.kind for e in events] == [GestureKind.HOLD_ACTIVATE]

    def test_reset_mid_hold(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 10, 10, 0))
        r.reset()
        assert r.advance_time(5000) == []

    def test_reset_clears_ids(self):
        r = new_recognizer()
        r.feed_sample(TouchSample(TouchPhase.DOWN, 1, 10, 10, 0))
        r.reset()
        with pytest.raises(UnknownTouchId):
            r.feed_sample(TouchSample(TouchPhase.UP, 1, 10, 10, 100))

    def test_reset_on_fresh_recognizer_is_noop(self):
        r = new_recognizer()
        r.reset()
        assert r.live_contacts == 0
        assert r.advance_time(1000) == []

    def test_reset_then_fresh_double_tap(self):
        r = new_recognizer()
        tap(r, (50, 50), 0, 100)
        r.reset()
        tap(r, (50, 50), 0, 100)
        events = tap(r, (50, 50), 250, 330, touch_id=2)
        assert [e.kind for e in events] == [GestureKind.DOUBLE_TAP]


class TestCorpusRecognition:
    def test_double_tap_corpus(self):
        rng = random.Random(100)
        for _ in range(50):
            samples, center, t_up = double_tap_script(rng)
            events = feed_all(new_recognizer(), samples)
            assert [e.kind for e in events] == [GestureKind.DOUBLE_TAP]
            assert events[0].point == pytest.approx(center)
            assert events[0].t_ms == t_up

    def test_hold_corpus(self):
        rng = random.Random(101)
        for _ in range(50):
            samples, point, t_activate = hold_script(rng)
            events = feed_all(new_recognizer(), samples)
            assert [e.kind for e in events] == [GestureKind.HOLD_ACTIVATE, GestureKind.HOLD_RELEASE]
            assert events[0].point == point
            assert events[0].t_ms == t_activate

    def test_lasso_corpus(self):
        rng = random.Random(102)
        for _ in range(50):
            samples, _ = lasso_script(rng)
            events = feed_all(new_recognizer(), samples)
            assert [e.kind for e in events] == [GestureKind.LASSO]

    def test_hold_pair_corpus(self):
        rng = random.Random(103)
        for _ in range(50):
            samples, p1, p2 = hold_pair_script(rng)
            events = feed_all(new_recognizer(), samples)
            kinds = [e.kind for e in events]
            assert kinds == [
                GestureKind.HOLD_ACTIVATE,
                GestureKind.HOLD_RELEASE,
                GestureKind.HOLD_ACTIVATE,
                GestureKind.HOLD_RELEASE,
            ]
            assert events[0].point == p1
            assert events[2].point == p2

    def test_exploratory_scans_stay_silent(self):
        rng = random.Random(104)
        for _ in range(100):
            samples = exploratory_scan_script(rng)
            events = feed_all(new_recognizer(), samples)
            assert events == []


class TestProperties:
    def test_no_spontaneous_events_without_downs(self):
        r = new_recognizer()
        for t in range(0, 500, 50):
            with pytest.raises(UnknownTouchId):
                r.feed_sample(TouchSample(TouchPhase.MOVE, 1, 10.0 + t, 10.0, t))
        assert r.advance_time(10_000) == []

    def test_single_taps_filtered_randomized(self):
        rng = random.Random(105)
        for _ in range(200):
            r = new_recognizer()
            p = (rng.uniform(0, 420), rng.uniform(0, 297))
            duration = rng.randint(1, 250)
            events = tap(r, p, 0, duration, touch_id=rng.randint(0, 9))
            events += r.advance_time(100_000)
            assert events == []

    def test_independence_from_interleaved_scanning(self):
        rng = random.Random(106)
        for make in (double_tap_script, hold_script, lasso_script):
            for _ in range(20):
                gesture_samples = make(rng)[0]
                solo = feed_all(new_recognizer(), gesture_samples)
                scan = exploratory_scan_script(rng.__class__(rng.randint(0, 10**6)), max_contacts=3)
                # distinct touch ids for the interloper
                scan = [
                    TouchSample(s.phase, s.touch_id + 50, s.x, s.y, s.t_ms) for s in scan
                ]
                merged = sorted(gesture_samples + scan, key=lambda s: s.t_ms)
                combined = feed_all(new_recognizer(), merged)
                assert [e.to_dict() for e in combined] == [e.to_dict() for e in solo]

    def test_determinism_byte_for_byte(self):
        rng_a = random.Random(107)
        rng_b = random.Random(107)
        samples_a = exploratory_scan_script(rng_a) + double_tap_script(rng_a, t0=10_000)[0]
        samples_b = exploratory_scan_script(rng_b) + double_tap_script(rng_b, t0=10_000)[0]
        run_a = json.dumps([e.to_dict() for e in feed_all(new_recognizer(), samples_a)])
        run_b = json.dumps([e.to_dict() for e in feed_all(new_recognizer(), samples_b)])
        assert run_a == run_b

    def test_causality(self):
        rng = random.Random(108)
        for make in (double_tap_script, hold_script, lasso_script, hold_pair_script):
            for _ in range(20):
                samples = make(rng)[0]
                r = new_recognizer()
                for s in samples:
                    for event in r.feed_sample(s):
                        assert event.t_ms <= s.t_ms
                        assert event.t_ms >= samples[0].t_ms

    def test_contact_cap(self):
        from tactmap.gestures import TooManyContacts

        r = new_recognizer()
        for i in range(10):
            r.feed_sample(TouchSample(TouchPhase.DOWN, i, 10.0 + i, 10.0, i))
        with pytest.raises(TooManyContacts):
            r.feed_sample(TouchSample(TouchPhase.DOWN, 10, 200.0, 10.0, 20))
