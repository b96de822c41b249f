"""Phonetics lesson authoring toolkit.

Models lessons (rules + examples with styled text and recorded
pronunciation), computes a synchronized presentation timeline from audio
durations, and compiles the lesson to a SMIL 3.0 document with typographic
markers, timed text, and a clickable temporal-navigation index.
"""

from .audio import AudioClip, probe_wav, synthesize_test_wav
from .lesson import (
    AudioSource,
    Example,
    Lesson,
    Rule,
    TimingConfig,
    lessons_equal,
    load_sph,
    new_lesson,
    save_sph,
)
from .preview import export_preview_html
from .scheduler import (
    Diagnostic,
    Event,
    Segment,
    Timeline,
    compute_timeline,
    format_clock,
    timeline_to_json,
    validate_lesson,
)
from .smilgen import Box, LayoutConfig, generate_smil
from .styled_text import (
    Marker,
    Run,
    StyledText,
    canonicalize,
    emit_xhtml,
    ipa_palette,
    parse_xhtml,
    validate_chars,
)
from .timegraph import (
    TimeGraph,
    active_at,
    compare_with_timeline,
    event_trace,
    parse_clock,
    parse_smil,
    resolve_link,
)

__version__ = "0.1.0"

__all__ = [
    "AudioClip",
    "AudioSource",
    "Box",
    "Diagnostic",
    "Event",
    "Example",
    "LayoutConfig",
    "Lesson",
    "Marker",
    "Rule",
    "Run",
    "Segment",
    "StyledText",
    "TimeGraph",
    "Timeline",
    "TimingConfig",
    "active_at",
    "canonicalize",
    "compare_with_timeline",
    "compute_timeline",
    "emit_xhtml",
    "event_trace",
    "export_preview_html",
    "format_clock",
    "generate_smil",
    "ipa_palette",
    "lessons_equal",
    "load_sph",
    "new_lesson",
    "parse_clock",
    "parse_smil",
    "parse_xhtml",
    "probe_wav",
    "resolve_link",
    "save_sph",
    "synthesize_test_wav",
    "timeline_to_json",
    "validate_chars",
    "validate_lesson",
]
