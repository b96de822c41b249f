"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class PhonLessonError(Exception):
    """Base class for all toolkit errors."""


# --- lesson model ---

class UnknownNode(PhonLessonError):
    """A rule or example address does not exist in the lesson."""


class PositionOutOfRange(PhonLessonError):
    """Insertion position beyond the current list length."""


class InvalidAudio(PhonLessonError):
    """Audio attachment rejected (zero duration, bad reference)."""


class PathTraversal(PhonLessonError):
    """Audio src escapes the asset base (absolute path or `..`)."""


# --- .sph serialization ---

class MalformedDocument(PhonLessonError):
    """Input is not well-formed XML or violates the expected nesting."""


class UnknownSchemaVersion(PhonLessonError):
    """Lesson file declares a version this toolkit does not read."""


class DuplicateId(PhonLessonError):
    """Rule or example ids collide within their scope."""


# --- styled text ---

class DisallowedElement(PhonLessonError):
    """XHTML fragment uses an element outside the p/span/br dialect."""


# --- WAV probing ---

class WavError(PhonLessonError):
    """Base class for RIFF/WAVE header failures."""


class NotRiff(WavError):
    """Missing RIFF/WAVE tags."""


class UnsupportedCodec(WavError):
    """audioFormat is not uncompressed PCM."""


class MissingChunk(WavError):
    """`fmt ` or `data` chunk absent."""


class CorruptHeader(WavError):
    """Zero byte rate, truncated chunk, or chunk overrunning the file."""


# --- scheduling / compile ---

class ValidationFailed(PhonLessonError):
    """Lesson failed compile-time validation; carries node-addressed diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        lines = "; ".join(str(d) for d in self.diagnostics)
        super().__init__(f"validation failed: {lines}")


# --- SMIL parsing / time graph ---

class UnknownElement(PhonLessonError):
    """Document uses an element outside the emitted SMIL subset."""


class BadClockValue(PhonLessonError):
    """Attribute is not a parseable clock value of the emitted grammar."""


class DanglingHref(PhonLessonError):
    """Link fragment has no matching xml:id."""


class UndeclaredRegion(PhonLessonError):
    """Body references a region the layout head does not declare."""


class OutOfRange(PhonLessonError):
    """Query time outside [0, total duration)."""
