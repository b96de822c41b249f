"""SMIL 3.0 document emission.

Produces the complete presentation: layout regions, one `par` per segment
inside a `seq` (marked with `xml:id` for navigation), `audio` elements at
their scheduled offsets, `smilText` blocks with typographic marker spans and
`tev` text events, and the clickable index table. Output is byte-deterministic:
2-space indent, LF line endings, fixed attribute order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lesson import Lesson, resolve_asset
from .scheduler import (
    SHOW_EXAMPLE_TEXT,
    START_EXAMPLE_AUDIO,
    START_RULE_AUDIO,
    Segment,
    Timeline,
    format_clock,
)
from .styled_text import Run, StyledText, _escape_attr, _escape_text

SMIL_NS = "http://www.w3.org/ns/SMIL"

LABEL_NUMBERED = "numbered"
LABEL_TEXT = "text"
LABEL_TEXT_MAX = 24


@dataclass(frozen=True)
class Box:
    left: int
    top: int
    width: int
    height: int


@dataclass(frozen=True)
class LayoutConfig:
    root_width_px: int = 1024
    root_height_px: int = 768
    title_box: Box = Box(0, 0, 1024, 80)
    index_box: Box = Box(0, 80, 200, 688)
    rule_box: Box = Box(200, 80, 824, 220)
    example_box: Box = Box(200, 300, 824, 468)
    index_entry_height_px: int = 40
    background_color: str = "#FFFFFF"
    region_colors: dict = field(
        default_factory=lambda: {
            "Title": "#DDEEFF",
            "Index": "#EEEEEE",
            "Regle": "#FFFFFF",
            "Exemple": "#FFFFF0",
        }
    )
    label_mode: str = LABEL_NUMBERED


def _span_smil(run: Run) -> str:
    """smilText span with text-style attributes in alphabetical order."""
    m = run.marker
    attrs = ""
    if m is not None:
        if m.color is not None:
            attrs += f' textColor="{m.color}"'
        if m.font_family is not None:
            attrs += f' textFontFamily="{_escape_attr(m.font_family)}"'
        if m.font_size_px is not None:
            attrs += f' textFontSize="{m.font_size_px}px"'
        if m.italic:
            attrs += ' textFontStyle="italic"'
        if m.bold:
            attrs += ' textFontWeight="bold"'
    text = _escape_text(run.text).replace("\n", "<br/>")
    return f"<span{attrs}>{text}</span>"


def _paragraph(st: StyledText) -> str:
    return "<p>" + "".join(_span_smil(run) for run in st.runs) + "</p>"


def index_label(lesson: Lesson, position: int, layout: LayoutConfig) -> str:
    if layout.label_mode == LABEL_TEXT:
        rule = lesson.rules[position - 1]
        text = rule.text.plain_text().strip()
        if text:
            return text[:LABEL_TEXT_MAX]
    return f"Rule {position}"


def _head_lines(rule_count: int, layout: LayoutConfig) -> list[str]:
    lines = ["  <head>", "    <layout>"]
    lines.append(
        f'      <root-layout width="{layout.root_width_px}" height="{layout.root_height_px}"'
        f' backgroundColor="{layout.background_color}"/>'
    )

    def region(name: str, box: Box, color: str) -> str:
        return (
            f'      <region xml:id="{name}" width="{box.width}" height="{box.height}"'
            f' left="{box.left}" top="{box.top}" backgroundColor="{color}"/>'
        )

    lines.append(region("Title", layout.title_box, layout.region_colors["Title"]))
    lines.append(region("Regle", layout.rule_box, layout.region_colors["Regle"]))
    lines.append(region("Exemple", layout.example_box, layout.region_colors["Exemple"]))
    ib = layout.index_box
    for k in range(1, rule_count + 1):
        # entries continue downward past the column; overflow is clipped
        box = Box(ib.left, ib.top + (k - 1) * layout.index_entry_height_px, ib.width, layout.index_entry_height_px)
        lines.append(region(f"Index{k}", box, layout.region_colors["Index"]))
    lines.append("    </layout>")
    lines.append("  </head>")
    return lines


def _segment_lines(lesson: Lesson, segment: Segment) -> list[str]:
    rule = lesson.rule(int(segment.events[0].rule_id))
    lines = [f'      <par xml:id="{segment.marker_id}" dur="{format_clock(segment.dur_ms)}">']

    for ev in segment.events:
        if ev.kind == START_RULE_AUDIO:
            src = resolve_asset(lesson, rule.audio.src)
            lines.append(
                f'        <audio begin="{format_clock(ev.rel_begin_ms)}"'
                f' dur="{format_clock(ev.span_ms)}" src="{_escape_attr(src)}"/>'
            )
        elif ev.kind == START_EXAMPLE_AUDIO:
            ex = lesson.node((ev.rule_id, ev.example_id))
            src = resolve_asset(lesson, ex.audio.src)
            lines.append(
                f'        <audio begin="{format_clock(ev.rel_begin_ms)}"'
                f' dur="{format_clock(ev.span_ms)}" src="{_escape_attr(src)}"/>'
            )

    lines.append('        <smilText region="Regle">')
    lines.append(f"          {_paragraph(rule.text)}")
    lines.append("        </smilText>")

    text_events = [ev for ev in segment.events if ev.kind == SHOW_EXAMPLE_TEXT]
    if text_events:
        first_begin = text_events[0].rel_begin_ms
        lines.append(
            f'        <smilText begin="{format_clock(first_begin)}" region="Exemple">'
        )
        for ev in text_events:
            delta = ev.rel_begin_ms - first_begin
            if delta:
                lines.append(f'          <tev begin="{format_clock(delta)}"/>')
            ex = lesson.node((ev.rule_id, ev.example_id))
            lines.append(f"          {_paragraph(ex.text)}")
        lines.append("        </smilText>")

    lines.append("      </par>")
    return lines


def generate_smil(lesson: Lesson, timeline: Timeline, layout: LayoutConfig | None = None) -> str:
    """Emit the full SMIL 3.0 Language document for a computed timeline."""
    layout = layout or LayoutConfig()
    rule_count = len(timeline.segments)

    lines = [f'<smil xmlns="{SMIL_NS}" version="3.0">']
    lines.extend(_head_lines(rule_count, layout))
    lines.append("  <body>")
    lines.append("    <par>")
    lines.append('      <smilText region="Title">')
    lines.append(f"        {_paragraph(lesson.title)}")
    lines.append("      </smilText>")
    lines.append("      <seq>")
    for segment in timeline.segments:
        lines.extend("  " + line for line in _segment_lines(lesson, segment))
    lines.append("      </seq>")
    for k, segment in enumerate(timeline.segments, start=1):
        label = index_label(lesson, k, layout)
        lines.append(f'      <a href="#{segment.marker_id}">')
        lines.append(
            f'        <smilText region="Index{k}">{_escape_text(label)}</smilText>'
        )
        lines.append("      </a>")
    lines.append("    </par>")
    lines.append("  </body>")
    lines.append("</smil>")
    return "\n".join(lines) + "\n"
