"""HTTP façade for the authoring UI.

All mutations go through the lesson-model operations; the service holds no
second data model. A revision counter on the lesson drives optimistic
concurrency: every mutating request carries `If-Match: <revision>` and a
stale revision is rejected with 409. Mutations are serialized by a lock and
autosaved to `lesson.sph`.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException, Request, Response

from . import audio as audio_mod
from .errors import PhonLessonError, UnknownNode, ValidationFailed, WavError
from .lesson import AudioSource, Lesson, NodeAddr, StyledText, new_lesson
from .project import Project
from .scheduler import compute_timeline, timeline_to_json
from .styled_text import emit_xhtml, ipa_palette, parse_xhtml

_ADDR_RE = re.compile(r"(\d+)(?:\.(\d+))?\Z")


def _parse_addr(addr: str) -> NodeAddr:
    m = _ADDR_RE.match(addr)
    if not m:
        raise HTTPException(404, f"bad node address {addr!r}")
    rule_id, example_id = m.groups()
    if example_id is None:
        return (int(rule_id),)
    return (int(rule_id), int(example_id))


def _parse_fragment(fragment: str) -> StyledText:
    try:
        text, _warnings = parse_xhtml(fragment)
    except PhonLessonError as exc:
        raise HTTPException(400, str(exc)) from exc
    return text


def _audio_json(audio):
    if audio is None:
        return None
    return {"src": audio.src, "durationMs": audio.duration_ms}


def _lesson_json(lesson: Lesson, revision: int) -> dict:
    return {
        "revision": revision,
        "assetBase": lesson.asset_base,
        "title": emit_xhtml(lesson.title),
        "timing": {
            "leadInMs": lesson.timing.lead_in_ms,
            "interGapMs": lesson.timing.inter_gap_ms,
            "tailMs": lesson.timing.tail_ms,
            "defaultDisplayMs": lesson.timing.default_display_ms,
        },
        "rules": [
            {
                "id": rule.id,
                "xhtml": emit_xhtml(rule.text),
                "audio": _audio_json(rule.audio),
                "examples": [
                    {
                        "id": ex.id,
                        "xhtml": emit_xhtml(ex.text),
                        "audio": _audio_json(ex.audio),
                    }
                    for ex in rule.examples
                ],
            }
            for rule in lesson.rules
        ],
    }


class LessonStore:
    """Exclusive-writer wrapper around one project's lesson."""

    def __init__(self, project: Project):
        self.project = project
        self.lock = threading.Lock()
        self.revision = 0
        if project.lesson_path.is_file():
            self.lesson = project.load_lesson()
        else:
            self.lesson = new_lesson(StyledText.plain("Untitled lesson"))
            project.root.mkdir(parents=True, exist_ok=True)
            project.save_lesson(self.lesson)

    def check_revision(self, if_match: str | None) -> None:
        if if_match is None:
            raise HTTPException(400, "mutating requests need an If-Match revision header")
        if if_match.strip() != str(self.revision):
            raise HTTPException(
                409, f"stale revision {if_match.strip()!r}, current is {self.revision}"
            )

    def commit(self) -> None:
        self.revision += 1
        self.project.save_lesson(self.lesson)


def create_app(project_root: Path | str) -> FastAPI:
    project = Project(Path(project_root))
    store = LessonStore(project)
    app = FastAPI(title="phonlesson authoring service")

    @app.get("/lesson")
    def get_lesson():
        return _lesson_json(store.lesson, store.revision)

    @app.get("/palette")
    def get_palette():
        return [{"char": ch, "name": name} for ch, name in ipa_palette()]

    @app.put("/lesson/title")
    async def put_title(request: Request, if_match: str | None = Header(default=None)):
        fragment = (await request.body()).decode("utf-8")
        with store.lock:
            store.check_revision(if_match)
            store.lesson.set_title(_parse_fragment(fragment))
            store.commit()
            return {"revision": store.revision}

    @app.post("/rules", status_code=201)
    async def post_rule(request: Request, if_match: str | None = Header(default=None)):
        body = await request.json()
        text = _parse_fragment(body.get("xhtml", "<p></p>"))
        position = body.get("position")
        with store.lock:
            store.check_revision(if_match)
            try:
                rule_id = store.lesson.add_rule(text, position)
            except PhonLessonError as exc:
                raise HTTPException(400, str(exc)) from exc
            store.commit()
            return {"id": rule_id, "revision": store.revision}

    @app.delete("/rules/{rule_id}")
    def delete_rule(rule_id: int, if_match: str | None = Header(default=None)):
        with store.lock:
            store.check_revision(if_match)
            try:
                removed = store.lesson.delete_rule(rule_id)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            store.commit()
            return {"removed": removed, "revision": store.revision}

    @app.post("/rules/{rule_id}/examples", status_code=201)
    async def post_example(
        rule_id: int, request: Request, if_match: str | None = Header(default=None)
    ):
        body = await request.json()
        text = _parse_fragment(body.get("xhtml", "<p></p>"))
        with store.lock:
            store.check_revision(if_match)
            try:
                example_id = store.lesson.add_example(rule_id, text)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            store.commit()
            return {"id": example_id, "revision": store.revision}

    @app.delete("/rules/{rule_id}/examples/{example_id}")
    def delete_example(
        rule_id: int, example_id: int, if_match: str | None = Header(default=None)
    ):
        with store.lock:
            store.check_revision(if_match)
            try:
                removed = store.lesson.delete_example(rule_id, example_id)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            store.commit()
            return {"removed": removed, "revision": store.revision}

    @app.put("/nodes/{addr}/text")
    async def put_text(addr: str, request: Request, if_match: str | None = Header(default=None)):
        node_addr = _parse_addr(addr)
        fragment = (await request.body()).decode("utf-8")
        text = _parse_fragment(fragment)
        with store.lock:
            store.check_revision(if_match)
            try:
                store.lesson.set_text(node_addr, text)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            store.commit()
            return {"revision": store.revision}

    @app.post("/nodes/{addr}/audio")
    async def post_audio(addr: str, request: Request, if_match: str | None = Header(default=None)):
        node_addr = _parse_addr(addr)
        data = await request.body()
        try:
            clip = audio_mod.probe_wav(data)
        except WavError as exc:
            raise HTTPException(422, f"bad wav upload: {exc}") from exc
        src = (
            f"r{node_addr[0]}.wav"
            if len(node_addr) == 1
            else f"r{node_addr[0]}e{node_addr[1]}.wav"
        )
        with store.lock:
            store.check_revision(if_match)
            try:
                store.lesson.node(node_addr)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            path = project.asset_path(store.lesson, src)
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(data)
            store.lesson.attach_audio(
                node_addr, AudioSource(src=src, duration_ms=clip.duration_ms)
            )
            store.commit()
            return {
                "src": src,
                "durationMs": clip.duration_ms,
                "sampleRateHz": clip.sample_rate_hz,
                "channels": clip.channels,
                "bitsPerSample": clip.bits_per_sample,
                "revision": store.revision,
            }

    @app.delete("/nodes/{addr}/audio")
    def delete_audio(addr: str, if_match: str | None = Header(default=None)):
        node_addr = _parse_addr(addr)
        with store.lock:
            store.check_revision(if_match)
            try:
                store.lesson.detach_audio(node_addr)
            except UnknownNode as exc:
                raise HTTPException(404, str(exc)) from exc
            store.commit()
            return {"revision": store.revision}

    def _timeline():
        with store.lock:
            diags = project.probe_assets(store.lesson)
            if diags:
                raise HTTPException(400, "; ".join(str(d) for d in diags))
            try:
                return store.lesson, compute_timeline(store.lesson)
            except ValidationFailed as exc:
                raise HTTPException(
                    400, "; ".join(str(d) for d in exc.diagnostics)
                ) from exc

    @app.get("/timeline")
    def get_timeline():
        _, timeline = _timeline()
        return timeline_to_json(timeline)

    @app.post("/compile")
    def post_compile():
        try:
            result = project.compile()
        except ValidationFailed as exc:
            raise HTTPException(400, "; ".join(str(d) for d in exc.diagnostics)) from exc
        project.write_dist(result)
        return {"smil": result.smil, "timeline": timeline_to_json(result.timeline)}

    @app.get("/dist/lesson.smil")
    def get_smil():
        path = project.dist_dir / "lesson.smil"
        if not path.is_file():
            raise HTTPException(404, "not compiled yet")
        return Response(content=path.read_text(encoding="utf-8"), media_type="application/smil+xml")

    return app
