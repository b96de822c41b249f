"""Presentation timeline computation.

One segment per rule, in rule order: the rule's text shows for the whole
segment, its pronunciation starts after the lead-in, and each example's
text-plus-audio slot follows the previous slot after the inter-gap. Example
text accumulates until segment end. All arithmetic is integer milliseconds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import ValidationFailed
from .lesson import Lesson
from .styled_text import validate_chars

SHOW_RULE_TEXT = "showRuleText"
START_RULE_AUDIO = "startRuleAudio"
SHOW_EXAMPLE_TEXT = "showExampleText"
START_EXAMPLE_AUDIO = "startExampleAudio"

INDEX_CAPACITY = 15


@dataclass(frozen=True)
class Event:
    kind: str
    rule_id: int
    example_id: Optional[int]
    rel_begin_ms: int
    span_ms: int


@dataclass(frozen=True)
class Segment:
    marker_id: str  # rule's 1-based position, decimal
    begin_ms: int
    dur_ms: int
    events: tuple[Event, ...]


@dataclass(frozen=True)
class Timeline:
    segments: tuple[Segment, ...]
    total_ms: int


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    node: str  # human-readable node address, e.g. "rule 2 example 1"
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.node}: {self.message}"


def _check_text(diags: list[Diagnostic], node: str, text) -> None:
    if text.is_blank():
        diags.append(Diagnostic("error", node, "text is empty"))
        return
    for offset, cp in validate_chars(text.plain_text()):
        diags.append(
            Diagnostic("error", node, f"disallowed character U+{cp:04X} at offset {offset}")
        )


def validate_lesson(lesson: Lesson) -> list[Diagnostic]:
    """Compile-time validation; errors block compilation, warnings do not."""
    diags: list[Diagnostic] = []
    if not lesson.rules:
        diags.append(Diagnostic("error", "lesson", "a lesson needs at least one rule"))
    if lesson.title.is_blank():
        diags.append(Diagnostic("warning", "lesson", "title is empty"))
    if len(lesson.rules) > INDEX_CAPACITY:
        diags.append(
            Diagnostic(
                "warning",
                "lesson",
                f"{len(lesson.rules)} rules exceed the {INDEX_CAPACITY}-entry index column; extra entries are clipped",
            )
        )
    for rule in lesson.rules:
        _check_text(diags, f"rule {rule.id}", rule.text)
        if rule.audio is not None and rule.audio.duration_ms <= 0:
            diags.append(Diagnostic("error", f"rule {rule.id}", f"audio {rule.audio.src!r} has unknown duration (not probed)"))
        if not rule.examples:
            diags.append(Diagnostic("warning", f"rule {rule.id}", "rule has no examples"))
        for ex in rule.examples:
            node = f"rule {rule.id} example {ex.id}"
            _check_text(diags, node, ex.text)
            if ex.audio is not None and ex.audio.duration_ms <= 0:
                diags.append(Diagnostic("error", node, f"audio {ex.audio.src!r} has unknown duration (not probed)"))
    return diags


def compute_timeline(lesson: Lesson) -> Timeline:
    """Resolve every segment duration and event offset from the lesson."""
    errors = [d for d in validate_lesson(lesson) if d.severity == "error"]
    if errors:
        raise ValidationFailed(errors)

    t = lesson.timing
    segments: list[Segment] = []
    clock = 0
    for position, rule in enumerate(lesson.rules, start=1):
        events: list[Event] = []
        rule_span = rule.audio.duration_ms if rule.audio is not None else t.default_display_ms
        if rule.audio is not None:
            events.append(Event(START_RULE_AUDIO, rule.id, None, t.lead_in_ms, rule_span))
        slot_end = t.lead_in_ms + rule_span

        example_slots: list[tuple] = []
        for ex in rule.examples:
            begin = slot_end + t.inter_gap_ms
            span = ex.audio.duration_ms if ex.audio is not None else t.default_display_ms
            example_slots.append((ex, begin, span))
            slot_end = begin + span

        dur = slot_end + t.tail_ms
        events.insert(0, Event(SHOW_RULE_TEXT, rule.id, None, 0, dur))
        for ex, begin, span in example_slots:
            events.append(Event(SHOW_EXAMPLE_TEXT, rule.id, ex.id, begin, dur - begin))
            if ex.audio is not None:
                events.append(Event(START_EXAMPLE_AUDIO, rule.id, ex.id, begin, span))

        events.sort(key=lambda e: (e.rel_begin_ms, e.kind != SHOW_RULE_TEXT))
        segments.append(Segment(str(position), clock, dur, tuple(events)))
        clock += dur

    return Timeline(tuple(segments), clock)


def format_clock(ms: int) -> str:
    """SMIL clock value: whole seconds as `Ns`, else decimal with zeros trimmed."""
    if ms < 0:
        raise ValueError("clock value must be non-negative")
    if ms % 1000 == 0:
        return f"{ms // 1000}s"
    return f"{ms / 1000:.3f}".rstrip("0") + "s"


def timeline_to_json(timeline: Timeline) -> dict:
    """JSON shape shared by the HTTP API, the CLI inspect command, and the UI."""
    return {
        "totalMs": timeline.total_ms,
        "segments": [
            {
                "markerId": seg.marker_id,
                "beginMs": seg.begin_ms,
                "durMs": seg.dur_ms,
                "events": [
                    {
                        "kind": ev.kind,
                        "ruleId": ev.rule_id,
                        "exampleId": ev.example_id,
                        "relBeginMs": ev.rel_begin_ms,
                        "spanMs": ev.span_ms,
                    }
                    for ev in seg.events
                ],
            }
            for seg in timeline.segments
        ],
    }
