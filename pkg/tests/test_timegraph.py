import random

import pytest

from phonlesson import (
    AudioSource,
    StyledText,
    active_at,
    compare_with_timeline,
    compute_timeline,
    event_trace,
    generate_smil,
    new_lesson,
    parse_clock,
    parse_smil,
    resolve_link,
)
from phonlesson.errors import (
    BadClockValue,
    DanglingHref,
    OutOfRange,
    UndeclaredRegion,
    UnknownElement,
)

from conftest import listing_lesson, random_lesson


def compiled_listing():
    lesson = listing_lesson()
    timeline = compute_timeline(lesson)
    return parse_smil(generate_smil(lesson, timeline)), timeline


class TestParseClock:
    @pytest.mark.parametrize("value,ms", [("28s", 28000), ("2.5s", 2500), ("0s", 0), ("1.234s", 1234)])
    def test_values(self, value, ms):
        assert parse_clock(value) == ms

    @pytest.mark.parametrize("value", ["", "5", "5m", "-1s", "1.2345s", "abc"])
    def test_rejects(self, value):
        with pytest.raises(BadClockValue):
            parse_clock(value)


class TestParseSmil:
    def test_listing_round_trip(self):
        graph, timeline = compiled_listing()
        assert [(s.marker_id, s.begin_ms, s.dur_ms) for s in graph.segments] == [("1", 0, 28000)]
        audio_begins = sorted(ev.begin_ms for ev in graph.audio_events)
        assert audio_begins == [1000, 11000, 14000]
        assert compare_with_timeline(graph, timeline) == []

    def test_dangling_href(self):
        lesson = listing_lesson()
        smil = generate_smil(lesson, compute_timeline(lesson)).replace('href="#1"', 'href="#9"')
        with pytest.raises(DanglingHref):
            parse_smil(smil)

    def test_undeclared_region(self):
        lesson = listing_lesson()
        smil = generate_smil(lesson, compute_timeline(lesson)).replace(
            '<smilText region="Regle">', '<smilText region="Mystery">'
        )
        with pytest.raises(UndeclaredRegion):
            parse_smil(smil)

    def test_unknown_element(self):
        lesson = listing_lesson()
        smil = generate_smil(lesson, compute_timeline(lesson)).replace(
            "</body>", "<video/></body>"
        )
        with pytest.raises(UnknownElement):
            parse_smil(smil)

    def test_oracle_equivalence_randomized(self):
        rng = random.Random(101)
        for _ in range(100):
            lesson = random_lesson(rng)
            timeline = compute_timeline(lesson)
            graph = parse_smil(generate_smil(lesson, timeline))
            assert compare_with_timeline(graph, timeline) == []


class TestActiveAt:
    def test_start_shows_rule_text_only(self):
        graph, _ = compiled_listing()
        active = active_at(graph, 0)
        assert "Regle" in active.regions
        assert "Exemple" not in active.regions
        assert active.audio == ()

    def test_mid_example(self):
        graph, _ = compiled_listing()
        active = active_at(graph, 12000)
        assert "Regle" in active.regions
        assert len(active.regions["Exemple"]) == 1
        assert active.audio == ("audio/Exemple1_R1.wav",)

    def test_example_text_accumulates(self):
        graph, _ = compiled_listing()
        active = active_at(graph, 20000)
        assert len(active.regions["Exemple"]) == 2

    def test_total_is_out_of_range(self):
        graph, timeline = compiled_listing()
        with pytest.raises(OutOfRange):
            active_at(graph, timeline.total_ms)
        with pytest.raises(OutOfRange):
            active_at(graph, -1)

    def test_segment_boundary_activates_only_next_segment(self):
        lesson = new_lesson(StyledText.plain("t"))
        r1 = lesson.add_rule(StyledText.plain("first"))
        lesson.attach_audio((r1,), AudioSource("a.wav", 2000))
        lesson.add_rule(StyledText.plain("second"))
        timeline = compute_timeline(lesson)
        graph = parse_smil(generate_smil(lesson, timeline))
        boundary = timeline.segments[1].begin_ms
        active = active_at(graph, boundary)
        assert active.regions["Regle"] == ["second"]
        active_before = active_at(graph, boundary - 1)
        assert active_before.regions["Regle"] == ["first"]


class TestResolveLink:
    def test_first_segment(self):
        graph, _ = compiled_listing()
        assert resolve_link(graph, "#1") == 0

    def test_second_segment_after_28s(self):
        lesson = listing_lesson()
        r2 = lesson.add_rule(StyledText.plain("second rule"))
        lesson.attach_audio((r2,), AudioSource("r2.wav", 4000))
        timeline = compute_timeline(lesson)
        graph = parse_smil(generate_smil(lesson, timeline))
        assert resolve_link(graph, "#2") == 28000

    def test_unknown_fragment(self):
        graph, _ = compiled_listing()
        with pytest.raises(DanglingHref):
            resolve_link(graph, "#zz")

    def test_links_hit_segment_begins_randomized(self):
        rng = random.Random(59)
        for _ in range(50):
            lesson = random_lesson(rng)
            timeline = compute_timeline(lesson)
            graph = parse_smil(generate_smil(lesson, timeline))
            for k, seg in enumerate(timeline.segments, start=1):
                assert resolve_link(graph, f"#{k}") == seg.begin_ms
                assert seg.begin_ms == sum(s.dur_ms for s in timeline.segments[: k - 1])


class TestEventTrace:
    def test_listing_trace(self):
        graph, _ = compiled_listing()
        trace = event_trace(graph)
        lines = trace.splitlines()
        assert lines[0] == "t=0 segment 1"
        assert "t=1000 audio audio/Regle 1.wav" in lines
        assert "t=11000 text Exemple" in lines
        assert "t=27000 audio-end audio/Exemple2_R1.wav" in lines
