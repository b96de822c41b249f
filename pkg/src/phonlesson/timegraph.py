"""Independent SMIL oracle: parse the emitted subset, resolve the time graph,
answer time queries, and simulate index-link navigation.

This is deliberately not a player. It understands exactly the subset the
generator emits (smil, head, layout, root-layout, region, body, par, seq,
audio, smilText, tev, p, span, br, a) and fails loudly on anything else.
Activation intervals are half-open: [begin, begin + span).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional
from xml.etree import ElementTree as ET

from .errors import (
    BadClockValue,
    DanglingHref,
    MalformedDocument,
    OutOfRange,
    UndeclaredRegion,
    UnknownElement,
)
from .smilgen import SMIL_NS

_XML_ID = "{http://www.w3.org/XML/1998/namespace}id"

_CLOCK_RE = re.compile(r"(\d+)(?:\.(\d{1,3}))?s\Z")

_ALLOWED_TAGS = {
    "smil", "head", "layout", "root-layout", "region", "body",
    "par", "seq", "audio", "smilText", "tev", "p", "span", "br", "a",
}


def parse_clock(value: str) -> int:
    """Parse the emitted clock grammar (`28s`, `2.5s`) to integer ms."""
    m = _CLOCK_RE.match(value.strip())
    if not m:
        raise BadClockValue(f"bad clock value {value!r}")
    whole, frac = m.groups()
    ms = int(whole) * 1000
    if frac:
        ms += int(frac.ljust(3, "0"))
    return ms


@dataclass(frozen=True)
class GraphSegment:
    marker_id: str
    begin_ms: int
    dur_ms: int


@dataclass(frozen=True)
class TextEvent:
    region: str
    begin_ms: int
    end_ms: int
    text: str  # plain text of the chunk


@dataclass(frozen=True)
class AudioEvent:
    src: str
    begin_ms: int
    end_ms: int


@dataclass
class TimeGraph:
    regions: set[str] = field(default_factory=set)
    segments: list[GraphSegment] = field(default_factory=list)
    text_events: list[TextEvent] = field(default_factory=list)
    audio_events: list[AudioEvent] = field(default_factory=list)
    links: dict[str, str] = field(default_factory=dict)  # "#frag" -> marker id
    total_ms: int = 0


@dataclass(frozen=True)
class ActiveSet:
    """Visible text per region plus playing audio, at one instant."""
    regions: dict
    audio: tuple[str, ...]


def _local(tag: str) -> str:
    if tag.startswith("{"):
        ns, _, local = tag[1:].partition("}")
        if ns not in (SMIL_NS, "http://www.w3.org/XML/1998/namespace"):
            raise UnknownElement(f"foreign namespace {ns!r}")
        return local
    return tag


def _check_tags(el: ET.Element) -> None:
    tag = _local(el.tag)
    if tag not in _ALLOWED_TAGS:
        raise UnknownElement(f"element <{tag}> outside the emitted subset")
    for child in el:
        _check_tags(child)


def _para_text(p: ET.Element) -> str:
    parts = [p.text or ""]
    for child in p:
        tag = _local(child.tag)
        if tag == "span":
            parts.append(child.text or "")
            for sub in child:
                if _local(sub.tag) != "br":
                    raise UnknownElement(f"<{_local(sub.tag)}> inside <span>")
                parts.append("\n")
                parts.append(sub.tail or "")
        elif tag == "br":
            parts.append("\n")
        else:
            raise UnknownElement(f"<{tag}> inside <p>")
        parts.append(child.tail or "")
    return "".join(parts)


def _smiltext_chunks(el: ET.Element) -> list[tuple[int, str]]:
    """Split a smilText into (relative begin, text) chunks at tev boundaries."""
    chunks: list[tuple[int, str]] = []
    offset = 0
    pieces: list[str] = []

    def flush():
        if pieces:
            chunks.append((offset, "".join(pieces)))
            pieces.clear()

    if el.text and el.text.strip():
        pieces.append(el.text.strip())
    for child in el:
        tag = _local(child.tag)
        if tag == "tev":
            flush()
            offset = parse_clock(child.get("begin", "0s"))
        elif tag == "p":
            pieces.append(_para_text(child))
        elif tag in ("span", "br"):
            pieces.append(_para_text(child) if tag == "span" else "\n")
        else:
            raise UnknownElement(f"<{tag}> inside <smilText>")
    flush()
    if not chunks and el.text is not None:
        chunks.append((0, el.text))
    return chunks


def parse_smil(document: str) -> TimeGraph:
    """Parse a generated SMIL document into a queryable time graph."""
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise MalformedDocument(f"bad XML: {exc}") from exc
    if _local(root.tag) != "smil":
        raise UnknownElement(f"root <{_local(root.tag)}>, expected <smil>")
    _check_tags(root)

    qual = (lambda t: f"{{{SMIL_NS}}}{t}") if root.tag.startswith("{") else (lambda t: t)

    graph = TimeGraph()

    # layout head
    for region in root.iter(qual("region")):
        name = region.get(_XML_ID) or region.get("id")
        if name is None:
            raise MalformedDocument("<region> without xml:id")
        graph.regions.add(name)

    body = root.find(qual("body"))
    if body is None:
        raise MalformedDocument("no <body>")

    def require_region(name: Optional[str]) -> str:
        if name is None:
            raise MalformedDocument("<smilText> without region")
        if name not in graph.regions:
            raise UndeclaredRegion(f"region {name!r} not declared in head")
        return name

    def read_smiltext(el: ET.Element, base_ms: int, end_ms: int) -> None:
        region = require_region(el.get("region"))
        start = base_ms + parse_clock(el.get("begin", "0s"))
        for delta, text in _smiltext_chunks(el):
            graph.text_events.append(TextEvent(region, start + delta, end_ms, text))

    def read_segment(par: ET.Element, begin_ms: int) -> GraphSegment:
        marker = par.get(_XML_ID)
        if marker is None:
            raise MalformedDocument("segment <par> without xml:id")
        dur_attr = par.get("dur")
        if dur_attr is None:
            raise MalformedDocument(f"segment <par> {marker!r} without dur")
        dur = parse_clock(dur_attr)
        seg_end = begin_ms + dur
        for child in par:
            tag = _local(child.tag)
            if tag == "audio":
                src = child.get("src")
                if src is None:
                    raise MalformedDocument("<audio> without src")
                start = begin_ms + parse_clock(child.get("begin", "0s"))
                span = parse_clock(child.get("dur", "0s"))
                graph.audio_events.append(AudioEvent(src, start, start + span))
            elif tag == "smilText":
                read_smiltext(child, begin_ms, seg_end)
            else:
                raise UnknownElement(f"<{tag}> inside segment <par>")
        return GraphSegment(marker, begin_ms, dur)

    top_par = body.find(qual("par"))
    if top_par is None:
        raise MalformedDocument("no top-level <par> in body")

    title_texts: list[ET.Element] = []
    seq = None
    anchors: list[ET.Element] = []
    for child in top_par:
        tag = _local(child.tag)
        if tag == "smilText":
            title_texts.append(child)
        elif tag == "seq":
            seq = child
        elif tag == "a":
            anchors.append(child)
        else:
            raise UnknownElement(f"<{tag}> at presentation top level")
    if seq is None:
        raise MalformedDocument("no <seq> of segments")

    clock = 0
    for child in seq:
        if _local(child.tag) != "par":
            raise UnknownElement(f"<{_local(child.tag)}> inside <seq>")
        segment = read_segment(child, clock)
        graph.segments.append(segment)
        clock += segment.dur_ms
    graph.total_ms = clock

    for el in title_texts:
        read_smiltext(el, 0, graph.total_ms)

    marker_ids = {seg.marker_id for seg in graph.segments}
    for anchor in anchors:
        href = anchor.get("href")
        if href is None or not href.startswith("#"):
            raise MalformedDocument(f"bad anchor href {href!r}")
        target = href[1:]
        if target not in marker_ids:
            raise DanglingHref(f"href {href!r} matches no xml:id")
        graph.links[href] = target
        for el in anchor:
            if _local(el.tag) == "smilText":
                read_smiltext(el, 0, graph.total_ms)

    return graph


def active_at(graph: TimeGraph, t_ms: int) -> ActiveSet:
    """Everything visible or audible at instant t (half-open intervals)."""
    if not 0 <= t_ms < graph.total_ms:
        raise OutOfRange(f"t={t_ms} outside [0, {graph.total_ms})")
    regions: dict[str, list[str]] = {}
    for ev in sorted(graph.text_events, key=lambda e: e.begin_ms):
        if ev.begin_ms <= t_ms < ev.end_ms:
            regions.setdefault(ev.region, []).append(ev.text)
    audio = tuple(
        ev.src for ev in sorted(graph.audio_events, key=lambda e: e.begin_ms)
        if ev.begin_ms <= t_ms < ev.end_ms
    )
    return ActiveSet(regions=regions, audio=audio)


def resolve_link(graph: TimeGraph, fragment: str) -> int:
    """Seek time for an index link: the absolute begin of the target segment."""
    marker = graph.links.get(fragment)
    if marker is None:
        raise DanglingHref(f"no link for fragment {fragment!r}")
    for seg in graph.segments:
        if seg.marker_id == marker:
            return seg.begin_ms
    raise DanglingHref(f"no segment for fragment {fragment!r}")


def compare_with_timeline(graph: TimeGraph, timeline) -> list[str]:
    """Cross-check a parsed document against a computed timeline.

    Returns a list of mismatch descriptions; empty means integer-exact
    agreement of segment begins/durations and every event offset. Title and
    index text is navigation chrome and excluded from the comparison.
    """
    from .scheduler import SHOW_EXAMPLE_TEXT, SHOW_RULE_TEXT

    problems: list[str] = []
    if len(graph.segments) != len(timeline.segments):
        return [f"segment count {len(graph.segments)} != {len(timeline.segments)}"]
    if graph.total_ms != timeline.total_ms:
        problems.append(f"total {graph.total_ms} != {timeline.total_ms}")

    for gseg, tseg in zip(graph.segments, timeline.segments):
        label = f"segment {tseg.marker_id}"
        if (gseg.marker_id, gseg.begin_ms, gseg.dur_ms) != (
            tseg.marker_id, tseg.begin_ms, tseg.dur_ms,
        ):
            problems.append(
                f"{label}: ({gseg.marker_id}, {gseg.begin_ms}, {gseg.dur_ms})"
                f" != ({tseg.marker_id}, {tseg.begin_ms}, {tseg.dur_ms})"
            )
            continue
        lo, hi = tseg.begin_ms, tseg.begin_ms + tseg.dur_ms
        got_text = sorted(
            (ev.region, ev.begin_ms - lo, ev.end_ms - lo)
            for ev in graph.text_events
            if ev.region in ("Regle", "Exemple") and lo <= ev.begin_ms < hi
        )
        want_text = sorted(
            ("Regle" if ev.kind == SHOW_RULE_TEXT else "Exemple", ev.rel_begin_ms, ev.rel_begin_ms + ev.span_ms)
            for ev in tseg.events
            if ev.kind in (SHOW_RULE_TEXT, SHOW_EXAMPLE_TEXT)
        )
        if got_text != want_text:
            problems.append(f"{label}: text events {got_text} != {want_text}")
        got_audio = sorted(
            (ev.begin_ms - lo, ev.end_ms - lo)
            for ev in graph.audio_events
            if lo <= ev.begin_ms < hi
        )
        want_audio = sorted(
            (ev.rel_begin_ms, ev.rel_begin_ms + ev.span_ms)
            for ev in tseg.events
            if ev.kind.endswith("Audio")
        )
        if got_audio != want_audio:
            problems.append(f"{label}: audio events {got_audio} != {want_audio}")
    return problems


def event_trace(graph: TimeGraph) -> str:
    """One line per event: `t=<ms> <kind> <target>`, time-ordered."""
    entries: list[tuple[int, int, str]] = []
    for seg in graph.segments:
        entries.append((seg.begin_ms, 0, f"segment {seg.marker_id}"))
    for ev in graph.text_events:
        entries.append((ev.begin_ms, 1, f"text {ev.region}"))
    for ev in graph.audio_events:
        entries.append((ev.begin_ms, 2, f"audio {ev.src}"))
        entries.append((ev.end_ms, 3, f"audio-end {ev.src}"))
    entries.sort()
    return "\n".join(f"t={t} {label}" for t, _, label in entries) + "\n"
