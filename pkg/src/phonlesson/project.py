"""Project directory handling: lesson file, audio assets, compiled output.

A project is a directory with `lesson.sph` at its root, audio files under
the lesson's asset base, and compiled artifacts under `dist/`. Compilation
never writes outside `dist/`.
"""

from __future__ import annotations

import shutil
from dataclasses import dataclass
from pathlib import Path

from . import audio as audio_mod
from .errors import PhonLessonError, ValidationFailed
from .lesson import Lesson, load_sph, resolve_asset, save_sph
from .preview import export_preview_html
from .scheduler import Diagnostic, Timeline, compute_timeline, validate_lesson
from .smilgen import LayoutConfig, generate_smil

LESSON_FILENAME = "lesson.sph"
DIST_DIRNAME = "dist"
SMIL_FILENAME = "lesson.smil"
PREVIEW_FILENAME = "preview.html"


@dataclass
class CompileResult:
    lesson: Lesson
    timeline: Timeline
    smil: str


class Project:
    def __init__(self, root: Path | str):
        self.root = Path(root)

    @property
    def lesson_path(self) -> Path:
        return self.root / LESSON_FILENAME

    @property
    def dist_dir(self) -> Path:
        return self.root / DIST_DIRNAME

    def load_lesson(self) -> Lesson:
        return load_sph(self.lesson_path.read_text(encoding="utf-8"))

    def save_lesson(self, lesson: Lesson) -> None:
        self.lesson_path.write_text(save_sph(lesson), encoding="utf-8")

    def asset_path(self, lesson: Lesson, src: str) -> Path:
        return self.root / resolve_asset(lesson, src)

    def probe_assets(self, lesson: Lesson) -> list[Diagnostic]:
        """Fill in audio durations from the files on disk; return problems."""
        diags: list[Diagnostic] = []
        for rule in lesson.rules:
            nodes = [(f"rule {rule.id}", rule)] + [
                (f"rule {rule.id} example {ex.id}", ex) for ex in rule.examples
            ]
            for label, node in nodes:
                if node.audio is None:
                    continue
                path = self.asset_path(lesson, node.audio.src)
                if not path.is_file():
                    diags.append(Diagnostic("error", label, f"audio file not found: {node.audio.src}"))
                    continue
                try:
                    clip = audio_mod.probe_wav(path.read_bytes(), path=node.audio.src)
                except PhonLessonError as exc:
                    diags.append(Diagnostic("error", label, f"bad wav {node.audio.src}: {exc}"))
                    continue
                node.audio.duration_ms = clip.duration_ms
        return diags

    def validate(self) -> list[Diagnostic]:
        """Schema check, character validation, audio probing, schedule check."""
        try:
            lesson = self.load_lesson()
        except (OSError, PhonLessonError) as exc:
            return [Diagnostic("error", "lesson.sph", str(exc))]
        diags = self.probe_assets(lesson)
        diags.extend(validate_lesson(lesson))
        return diags

    def compile(self, layout: LayoutConfig | None = None) -> CompileResult:
        """Probe, schedule, and generate SMIL; raises ValidationFailed on errors."""
        try:
            lesson = self.load_lesson()
        except (OSError, PhonLessonError) as exc:
            raise ValidationFailed([Diagnostic("error", "lesson.sph", str(exc))]) from exc
        probe_errors = self.probe_assets(lesson)
        if probe_errors:
            raise ValidationFailed(probe_errors)
        timeline = compute_timeline(lesson)
        smil = generate_smil(lesson, timeline, layout)
        return CompileResult(lesson=lesson, timeline=timeline, smil=smil)

    def write_dist(self, result: CompileResult, layout: LayoutConfig | None = None) -> Path:
        """Write lesson.smil, preview.html, and the referenced audio to dist/."""
        self.dist_dir.mkdir(parents=True, exist_ok=True)
        smil_path = self.dist_dir / SMIL_FILENAME
        smil_path.write_text(result.smil, encoding="utf-8")
        preview_path = self.dist_dir / PREVIEW_FILENAME
        preview_path.write_text(
            export_preview_html(result.lesson, result.timeline, layout), encoding="utf-8"
        )
        for rule in result.lesson.rules:
            for node in [rule, *rule.examples]:
                if node.audio is None:
                    continue
                rel = resolve_asset(result.lesson, node.audio.src)
                dest = self.dist_dir / rel
                dest.parent.mkdir(parents=True, exist_ok=True)
                shutil.copyfile(self.root / rel, dest)
        return smil_path
