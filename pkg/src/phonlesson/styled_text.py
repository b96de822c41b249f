"""Marker-annotated text runs and their XHTML fragment form.

A StyledText is an ordered list of runs; each run is a piece of text with an
optional typographic marker (color, font family, size, bold, italic). The
XHTML dialect is intentionally tiny: one ``<p>`` wrapping ``<span>`` elements,
``<br/>`` for newlines, and a fixed set of style properties.
"""

from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass
from typing import Iterable, Optional
from xml.etree import ElementTree as ET

from .errors import DisallowedElement, MalformedDocument

_COLOR_RE = re.compile(r"#[0-9A-F]{6}\Z")
_FONT_FAMILY_RE = re.compile(r"[A-Za-z0-9 ,'\-]+\Z")

FONT_SIZE_MIN = 6
FONT_SIZE_MAX = 96


@dataclass(frozen=True)
class Marker:
    """Typographic annotation applied to a run of text."""

    color: Optional[str] = None
    font_family: Optional[str] = None
    font_size_px: Optional[int] = None
    bold: bool = False
    italic: bool = False

    def __post_init__(self):
        if self.color is not None:
            normalized = self.color.upper()
            if not _COLOR_RE.match(normalized):
                raise ValueError(f"bad color {self.color!r}, expected #RRGGBB")
            object.__setattr__(self, "color", normalized)
        if self.font_family is not None and not _FONT_FAMILY_RE.match(self.font_family):
            raise ValueError(f"bad font family {self.font_family!r}")
        if self.font_size_px is not None and not (
            FONT_SIZE_MIN <= self.font_size_px <= FONT_SIZE_MAX
        ):
            raise ValueError(f"font size {self.font_size_px} outside {FONT_SIZE_MIN}..{FONT_SIZE_MAX}")

    def is_empty(self) -> bool:
        return (
            self.color is None
            and self.font_family is None
            and self.font_size_px is None
            and not self.bold
            and not self.italic
        )


@dataclass(frozen=True)
class Run:
    text: str
    marker: Optional[Marker] = None


@dataclass(frozen=True)
class StyledText:
    """Canonical marked-up text: non-empty runs, adjacent equal markers merged."""

    runs: tuple[Run, ...] = ()

    @staticmethod
    def plain(text: str) -> "StyledText":
        return canonicalize([Run(text)])

    def plain_text(self) -> str:
        return "".join(r.text for r in self.runs)

    def is_blank(self) -> bool:
        return not self.plain_text().strip()


def _norm_marker(marker: Optional[Marker]) -> Optional[Marker]:
    if marker is None or marker.is_empty():
        return None
    return marker  # colors already uppercased by Marker.__post_init__


def canonicalize(runs: Iterable[Run | tuple]) -> StyledText:
    """Drop empty runs, merge adjacent equal-marker runs, normalize markers."""
    out: list[Run] = []
    for item in runs:
        run = item if isinstance(item, Run) else Run(*item)
        if not run.text:
            continue
        marker = _norm_marker(run.marker)
        if out and out[-1].marker == marker:
            out[-1] = Run(out[-1].text + run.text, marker)
        else:
            out.append(Run(run.text, marker))
    return StyledText(tuple(out))


# --- XHTML fragment emission ---

def _escape_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(text: str) -> str:
    return _escape_text(text).replace('"', "&quot;")


def marker_style(marker: Marker) -> str:
    """CSS style string with properties in fixed order (byte-stable output)."""
    props = []
    if marker.color is not None:
        props.append(f"color:{marker.color}")
    if marker.font_family is not None:
        props.append(f"font-family:{marker.font_family}")
    if marker.font_size_px is not None:
        props.append(f"font-size:{marker.font_size_px}px")
    if marker.bold:
        props.append("font-weight:bold")
    if marker.italic:
        props.append("font-style:italic")
    return ";".join(props)


def _emit_run_text(text: str) -> str:
    return _escape_text(text).replace("\n", "<br/>")


def emit_xhtml(st: StyledText) -> str:
    """One ``<p>`` wrapping one ``<span>`` per run; deterministic bytes."""
    parts = ["<p>"]
    for run in st.runs:
        if run.marker is None:
            parts.append(f"<span>{_emit_run_text(run.text)}</span>")
        else:
            style = _escape_attr(marker_style(run.marker))
            parts.append(f'<span style="{style}">{_emit_run_text(run.text)}</span>')
    parts.append("</p>")
    return "".join(parts)


# --- XHTML fragment parsing ---

_ALLOWED_ELEMENTS = {"p", "span", "br"}


def parse_style(style: str) -> tuple[Marker, list[str]]:
    """Parse the dialect's style string; unknown properties become warnings."""
    color = family = None
    size = None
    bold = italic = False
    warnings: list[str] = []
    for piece in style.split(";"):
        piece = piece.strip()
        if not piece:
            continue
        if ":" not in piece:
            warnings.append(f"ignored malformed style property {piece!r}")
            continue
        prop, _, value = piece.partition(":")
        prop = prop.strip().lower()
        value = value.strip()
        if prop == "color":
            color = value
        elif prop == "font-family":
            family = value
        elif prop == "font-size":
            if not value.endswith("px"):
                raise MalformedDocument(f"font-size must be in px, got {value!r}")
            size = int(value[:-2])
        elif prop == "font-weight":
            bold = value == "bold"
        elif prop == "font-style":
            italic = value == "italic"
        else:
            warnings.append(f"ignored unknown style property {prop!r}")
    return Marker(color=color, font_family=family, font_size_px=size, bold=bold, italic=italic), warnings


def _element_text(el: ET.Element) -> str:
    """Flatten an element's text with <br/> as newline; rejects nested markup."""
    parts = [el.text or ""]
    for child in el:
        tag = child.tag
        if tag != "br":
            raise DisallowedElement(f"element <{tag}> not allowed inside <span>")
        parts.append("\n")
        parts.append(child.tail or "")
    return "".join(parts)


def parse_xhtml(fragment: str) -> tuple[StyledText, list[str]]:
    """Inverse of emit_xhtml. Returns the parsed runs plus style warnings."""
    try:
        root = ET.fromstring(fragment)
    except ET.ParseError as exc:
        raise MalformedDocument(f"bad XHTML fragment: {exc}") from exc
    if root.tag != "p":
        if root.tag in _ALLOWED_ELEMENTS:
            raise MalformedDocument(f"fragment root must be <p>, got <{root.tag}>")
        raise DisallowedElement(f"element <{root.tag}> not allowed")

    warnings: list[str] = []
    runs: list[Run] = []

    def add_text(text: str, marker: Optional[Marker]):
        if text:
            runs.append(Run(text, marker))

    add_text(root.text or "", None)
    for child in root:
        if child.tag == "span":
            marker = None
            style = child.get("style")
            if style is not None:
                marker, w = parse_style(style)
                warnings.extend(w)
            add_text(_element_text(child), marker)
        elif child.tag == "br":
            add_text("\n", None)
        else:
            raise DisallowedElement(f"element <{child.tag}> not allowed")
        add_text(child.tail or "", None)
    return canonicalize(runs), warnings


# --- character validation ---

def _allowed_codepoint(cp: int) -> bool:
    return (
        cp == 0x0A  # newline, round-trips as <br/>
        or 0x20 <= cp <= 0x7E  # Basic Latin printable
        or 0xA0 <= cp <= 0xFF  # Latin-1 letters and punctuation
        or 0x0250 <= cp <= 0x02AF  # IPA Extensions
        or 0x02B0 <= cp <= 0x02FF  # Spacing Modifier Letters
        or 0x0300 <= cp <= 0x036F  # Combining Diacritical Marks
        or 0x2000 <= cp <= 0x206F  # General Punctuation
    )


def validate_chars(text: str) -> list[tuple[int, int]]:
    """Return (offset, codepoint) for every character outside the allowed set."""
    return [(i, ord(ch)) for i, ch in enumerate(text) if not _allowed_codepoint(ord(ch))]


# --- IPA palette ---

_EXTRA_MARKS = {
    0x02C8: "primary stress",
    0x02CC: "secondary stress",
    0x02D0: "length mark",
}

_NAME_PREFIXES = (
    "LATIN SMALL LETTER ",
    "LATIN CAPITAL LETTER ",
    "LATIN LETTER ",
    "MODIFIER LETTER ",
)


def _display_name(cp: int) -> str:
    name = unicodedata.name(chr(cp), f"U+{cp:04X}")
    for prefix in _NAME_PREFIXES:
        if name.startswith(prefix):
            name = name[len(prefix):]
            break
    return name.lower()


def ipa_palette() -> list[tuple[str, str]]:
    """Stable (character, display name) list for the UI's phonetic picker."""
    entries = [(chr(cp), _display_name(cp)) for cp in range(0x0250, 0x02B0)]
    entries.extend((chr(cp), name) for cp, name in _EXTRA_MARKS.items())
    return entries
