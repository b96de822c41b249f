#!/usr/bin/env python3
"""Regenerate the oracle fixtures the frontend tests compare against.

Run from the repository root after changing the scheduler or the simulator:

    python3 frontend/scripts/gen_fixtures.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[2] / "tests"))

from conftest import listing_lesson  # noqa: E402

from phonlesson import (  # noqa: E402
    active_at,
    compute_timeline,
    emit_xhtml,
    generate_smil,
    parse_smil,
    timeline_to_json,
)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "test" / "fixtures"


def lesson_json(lesson):
    def audio(a):
        return None if a is None else {"src": a.src, "durationMs": a.duration_ms}

    return {
        "revision": 0,
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
                "id": r.id,
                "xhtml": emit_xhtml(r.text),
                "audio": audio(r.audio),
                "examples": [
                    {"id": e.id, "xhtml": emit_xhtml(e.text), "audio": audio(e.audio)}
                    for e in r.examples
                ],
            }
            for r in lesson.rules
        ],
    }


def main():
    lesson = listing_lesson()
    timeline = compute_timeline(lesson)
    graph = parse_smil(generate_smil(lesson, timeline))

    boundaries = [seg.begin_ms for seg in timeline.segments] + [timeline.total_ms]
    times = {0}
    for b in boundaries:
        times.update(t for t in (b - 1, b, b + 1) if 0 <= t < timeline.total_ms)
    # mid-example instants
    for seg in timeline.segments:
        for ev in seg.events:
            if ev.kind == "startExampleAudio":
                times.add(seg.begin_ms + ev.rel_begin_ms + ev.span_ms // 2)

    samples = []
    for t in sorted(times):
        active = active_at(graph, t)
        samples.append(
            {
                "tMs": t,
                "regle": active.regions.get("Regle", []),
                "exemple": active.regions.get("Exemple", []),
                "audio": list(active.audio),
            }
        )

    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    (FIXTURE_DIR / "lesson.json").write_text(
        json.dumps(lesson_json(lesson), indent=2, ensure_ascii=False) + "\n"
    )
    (FIXTURE_DIR / "timeline.json").write_text(
        json.dumps(timeline_to_json(timeline), indent=2) + "\n"
    )
    (FIXTURE_DIR / "active_samples.json").write_text(
        json.dumps(samples, indent=2, ensure_ascii=False) + "\n"
    )
    print(f"wrote fixtures for {len(samples)} sample times to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
