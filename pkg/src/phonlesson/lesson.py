"""Lesson document tree, editing operations, and the `.sph` serialization.

A lesson is a title plus an ordered list of rules; each rule carries styled
text, an optional recorded pronunciation, and an ordered list of examples.
Node ids are monotonically increasing per scope and never reused, so index
anchors and audit trails stay stable across edits.
"""

from __future__ import annotations

import posixpath
import re
from dataclasses import dataclass, field
from typing import Optional, Union
from xml.etree import ElementTree as ET

from .audio import AudioClip
from .errors import (
    DuplicateId,
    InvalidAudio,
    MalformedDocument,
    PathTraversal,
    PositionOutOfRange,
    UnknownNode,
    UnknownSchemaVersion,
)
from .styled_text import Marker, Run, StyledText, _escape_attr, _escape_text, canonicalize

SPH_VERSION = "1.0"

TIMING_MAX_MS = 3_600_000

# Node address: (rule_id,) or (rule_id, example_id)
NodeAddr = Union[tuple[int], tuple[int, int]]


@dataclass
class AudioSource:
    """Reference to a recorded clip, relative to the lesson's asset base.

    duration_ms is 0 until the file has been probed; the scheduler refuses
    unprobed audio.
    """

    src: str
    duration_ms: int = 0


@dataclass
class TimingConfig:
    lead_in_ms: int = 1000
    inter_gap_ms: int = 1000
    tail_ms: int = 1000
    default_display_ms: int = 3000

    def __post_init__(self):
        if self.lead_in_ms < 0 or self.inter_gap_ms < 0 or self.tail_ms < 0:
            raise ValueError("timing gaps must be non-negative")
        if self.default_display_ms <= 0:
            raise ValueError("default display duration must be positive")
        for value in (self.lead_in_ms, self.inter_gap_ms, self.tail_ms, self.default_display_ms):
            if value >= TIMING_MAX_MS:
                raise ValueError(f"timing value {value} ms exceeds one hour sanity bound")


@dataclass
class Example:
    id: int
    text: StyledText
    audio: Optional[AudioSource] = None


@dataclass
class Rule:
    id: int
    text: StyledText
    audio: Optional[AudioSource] = None
    examples: list[Example] = field(default_factory=list)
    _next_example_id: int = 1


def check_audio_src(src: str) -> str:
    """Reject absolute paths and `..` traversal; src stays under the asset base."""
    if not src:
        raise PathTraversal("empty audio src")
    if src.startswith("/") or re.match(r"[A-Za-z]:[/\\]", src):
        raise PathTraversal(f"absolute audio src {src!r}")
    parts = src.replace("\\", "/").split("/")
    if ".." in parts:
        raise PathTraversal(f"audio src {src!r} escapes the asset base")
    return src


@dataclass
class Lesson:
    title: StyledText
    rules: list[Rule] = field(default_factory=list)
    timing: TimingConfig = field(default_factory=TimingConfig)
    asset_base: str = "audio/"
    _next_rule_id: int = 1

    # --- lookup ---

    def rule(self, rule_id: int) -> Rule:
        for rule in self.rules:
            if rule.id == rule_id:
                return rule
        raise UnknownNode(f"rule {rule_id}")

    def node(self, addr: NodeAddr) -> Union[Rule, Example]:
        rule = self.rule(addr[0])
        if len(addr) == 1:
            return rule
        for ex in rule.examples:
            if ex.id == addr[1]:
                return ex
        raise UnknownNode(f"rule {addr[0]} example {addr[1]}")

    # --- editing operations ---

    def add_rule(self, text: StyledText, position: Optional[int] = None) -> int:
        if position is None:
            position = len(self.rules)
        if not 0 <= position <= len(self.rules):
            raise PositionOutOfRange(f"position {position} beyond {len(self.rules)} rules")
        rule_id = self._next_rule_id
        self._next_rule_id += 1
        self.rules.insert(position, Rule(id=rule_id, text=text))
        return rule_id

    def add_example(self, rule_id: int, text: StyledText) -> int:
        rule = self.rule(rule_id)
        example_id = rule._next_example_id
        rule._next_example_id += 1
        rule.examples.append(Example(id=example_id, text=text))
        return example_id

    def delete_rule(self, rule_id: int) -> int:
        """Remove the rule and, cascading, all its examples. Returns node count."""
        rule = self.rule(rule_id)
        self.rules.remove(rule)
        return 1 + len(rule.examples)

    def delete_example(self, rule_id: int, example_id: int) -> int:
        rule = self.rule(rule_id)
        ex = self.node((rule_id, example_id))
        rule.examples.remove(ex)
        return 1

    def attach_audio(self, addr: NodeAddr, clip: Union[AudioClip, AudioSource]) -> None:
        """Attach (or overwrite) a node's pronunciation reference."""
        node = self.node(addr)
        if isinstance(clip, AudioClip):
            clip = AudioSource(src=clip.path, duration_ms=clip.duration_ms)
        if clip.duration_ms <= 0:
            raise InvalidAudio(f"clip {clip.src!r} has no positive duration")
        check_audio_src(clip.src)
        node.audio = AudioSource(src=clip.src, duration_ms=clip.duration_ms)

    def detach_audio(self, addr: NodeAddr) -> None:
        self.node(addr).audio = None

    def set_text(self, addr: NodeAddr, text: StyledText) -> None:
        self.node(addr).text = text

    def set_title(self, text: StyledText) -> None:
        self.title = text


def new_lesson(title: StyledText) -> Lesson:
    return Lesson(title=title)


# --- structural equality (the round-trip relation) ---

def _audio_equal(a: Optional[AudioSource], b: Optional[AudioSource]) -> bool:
    if a is None or b is None:
        return a is b is None
    return a.src == b.src  # durations are probed, not serialized


def lessons_equal(a: Lesson, b: Lesson) -> bool:
    if a.title != b.title or a.timing != b.timing or a.asset_base != b.asset_base:
        return False
    if len(a.rules) != len(b.rules):
        return False
    for ra, rb in zip(a.rules, b.rules):
        if ra.id != rb.id or ra.text != rb.text or not _audio_equal(ra.audio, rb.audio):
            return False
        if len(ra.examples) != len(rb.examples):
            return False
        for ea, eb in zip(ra.examples, rb.examples):
            if ea.id != eb.id or ea.text != eb.text or not _audio_equal(ea.audio, eb.audio):
                return False
    return True


# --- .sph serialization ---

def _span_sph(run: Run) -> str:
    attrs = ""
    m = run.marker
    if m is not None:
        if m.color is not None:
            attrs += f' color="{_escape_attr(m.color)}"'
        if m.font_family is not None:
            attrs += f' font-family="{_escape_attr(m.font_family)}"'
        if m.font_size_px is not None:
            attrs += f' font-size-px="{m.font_size_px}"'
        if m.bold:
            attrs += ' font-weight="bold"'
        if m.italic:
            attrs += ' font-style="italic"'
    return f"<span{attrs}>{_escape_text(run.text)}</span>"


def _spans_sph(st: StyledText) -> str:
    return "".join(_span_sph(run) for run in st.runs)


def save_sph(lesson: Lesson) -> str:
    """Serialize to the `.sph` XML dialect; byte-deterministic."""
    t = lesson.timing
    lines = [
        f'<lesson version="{SPH_VERSION}" asset-base="{_escape_attr(lesson.asset_base)}">',
        f'  <timing lead-in-ms="{t.lead_in_ms}" inter-gap-ms="{t.inter_gap_ms}"'
        f' tail-ms="{t.tail_ms}" default-display-ms="{t.default_display_ms}"/>',
        f"  <title>{_spans_sph(lesson.title)}</title>",
    ]
    for rule in lesson.rules:
        lines.append(f'  <rule id="{rule.id}">')
        lines.append(f"    <text>{_spans_sph(rule.text)}</text>")
        if rule.audio is not None:
            lines.append(f'    <audio src="{_escape_attr(rule.audio.src)}"/>')
        for ex in rule.examples:
            lines.append(f'    <example id="{ex.id}">')
            lines.append(f"      <text>{_spans_sph(ex.text)}</text>")
            if ex.audio is not None:
                lines.append(f'      <audio src="{_escape_attr(ex.audio.src)}"/>')
            lines.append("    </example>")
        lines.append("  </rule>")
    lines.append("</lesson>")
    return "\n".join(lines) + "\n"


def _int_attr(el: ET.Element, name: str) -> int:
    value = el.get(name)
    if value is None or not re.match(r"-?\d+\Z", value):
        raise MalformedDocument(f"<{el.tag}> needs integer attribute {name!r}")
    return int(value)


def _parse_spans(el: ET.Element) -> StyledText:
    runs: list[Run] = []
    if el.text and el.text.strip():
        raise MalformedDocument(f"stray text in <{el.tag}>; expected <span> children")
    for child in el:
        if child.tag != "span":
            raise MalformedDocument(f"unexpected <{child.tag}> inside <{el.tag}>")
        if len(child):
            raise MalformedDocument("nested elements inside <span>")
        size = child.get("font-size-px")
        marker = Marker(
            color=child.get("color"),
            font_family=child.get("font-family"),
            font_size_px=int(size) if size is not None else None,
            bold=child.get("font-weight") == "bold",
            italic=child.get("font-style") == "italic",
        )
        runs.append(Run(child.text or "", marker if not marker.is_empty() else None))
        if child.tail and child.tail.strip():
            raise MalformedDocument("stray text between <span> elements")
    return canonicalize(runs)


def _parse_audio(el: Optional[ET.Element]) -> Optional[AudioSource]:
    if el is None:
        return None
    src = el.get("src")
    if src is None:
        raise MalformedDocument("<audio> needs a src attribute")
    return AudioSource(src=check_audio_src(src))


def load_sph(document: str) -> Lesson:
    """Parse a `.sph` document; inverse of save_sph on structural equality."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedDocument(f"bad XML: {exc}") from exc
    if root.tag != "lesson":
        raise MalformedDocument(f"root element is <{root.tag}>, expected <lesson>")
    version = root.get("version")
    if version != SPH_VERSION:
        raise UnknownSchemaVersion(f"version {version!r}, expected {SPH_VERSION!r}")

    timing_el = root.find("timing")
    timing = TimingConfig()
    if timing_el is not None:
        try:
            timing = TimingConfig(
                lead_in_ms=_int_attr(timing_el, "lead-in-ms"),
                inter_gap_ms=_int_attr(timing_el, "inter-gap-ms"),
                tail_ms=_int_attr(timing_el, "tail-ms"),
                default_display_ms=_int_attr(timing_el, "default-display-ms"),
            )
        except ValueError as exc:
            raise MalformedDocument(str(exc)) from exc

    title_el = root.find("title")
    title = _parse_spans(title_el) if title_el is not None else StyledText()

    lesson = Lesson(
        title=title,
        timing=timing,
        asset_base=root.get("asset-base", "audio/"),
    )
    seen_rule_ids: set[int] = set()
    for rule_el in root.findall("rule"):
        rule_id = _int_attr(rule_el, "id")
        if rule_id <= 0:
            raise MalformedDocument(f"rule id {rule_id} must be positive")
        if rule_id in seen_rule_ids:
            raise DuplicateId(f"rule id {rule_id}")
        seen_rule_ids.add(rule_id)
        text_el = rule_el.find("text")
        if text_el is None:
            raise MalformedDocument(f"rule {rule_id} has no <text>")
        rule = Rule(id=rule_id, text=_parse_spans(text_el), audio=_parse_audio(rule_el.find("audio")))
        seen_example_ids: set[int] = set()
        for ex_el in rule_el.findall("example"):
            ex_id = _int_attr(ex_el, "id")
            if ex_id <= 0:
                raise MalformedDocument(f"example id {ex_id} must be positive")
            if ex_id in seen_example_ids:
                raise DuplicateId(f"example id {ex_id} in rule {rule_id}")
            seen_example_ids.add(ex_id)
            ex_text_el = ex_el.find("text")
            if ex_text_el is None:
                raise MalformedDocument(f"rule {rule_id} example {ex_id} has no <text>")
            rule.examples.append(
                Example(
                    id=ex_id,
                    text=_parse_spans(ex_text_el),
                    audio=_parse_audio(ex_el.find("audio")),
                )
            )
        rule._next_example_id = max(seen_example_ids, default=0) + 1
        lesson.rules.append(rule)
    lesson._next_rule_id = max(seen_rule_ids, default=0) + 1
    return lesson


def resolve_asset(lesson: Lesson, src: str) -> str:
    """Join an audio src with the lesson's asset base (POSIX semantics)."""
    check_audio_src(src)
    return posixpath.join(lesson.asset_base.rstrip("/"), src)
