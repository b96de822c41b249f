"""Self-contained HTML preview of a compiled lesson.

Browsers do not play SMIL, so publication previews embed the resolved
timeline as structured data plus a small playback routine: the index column
seeks, regions show and accumulate text at the scheduled offsets, and audio
elements fire at their begins. Only the referenced audio files are external.
"""

from __future__ import annotations

import json

from .lesson import Lesson, resolve_asset
from .scheduler import (
    SHOW_EXAMPLE_TEXT,
    SHOW_RULE_TEXT,
    START_EXAMPLE_AUDIO,
    START_RULE_AUDIO,
    Timeline,
)
from .smilgen import LayoutConfig, index_label
from .styled_text import emit_xhtml

_PLAYER_JS = """\
var data = JSON.parse(document.getElementById('lesson-data').textContent);
var pos = 0, timer = null, playing = false, audios = [];
function regionHtml(t) {
  var regle = '', exemple = '';
  data.segments.forEach(function (seg) {
    if (t < seg.beginMs || t >= seg.beginMs + seg.durMs) return;
    seg.events.forEach(function (ev) {
      var rel = t - seg.beginMs;
      if (rel < ev.relBeginMs || rel >= ev.relBeginMs + ev.spanMs) return;
      if (ev.kind === 'showRuleText') regle += ev.html;
      if (ev.kind === 'showExampleText') exemple += ev.html;
    });
  });
  document.getElementById('regle').innerHTML = regle;
  document.getElementById('exemple').innerHTML = exemple;
}
function stopAudio() {
  audios.forEach(function (a) { a.pause(); });
  audios = [];
}
function render() {
  regionHtml(pos);
  document.getElementById('clock').textContent = (pos / 1000).toFixed(1) + 's';
}
function tick() {
  pos += 100;
  if (pos >= data.totalMs) { stop(); pos = data.totalMs - 1; }
  data.segments.forEach(function (seg) {
    seg.events.forEach(function (ev) {
      if (!ev.src) return;
      var abs = seg.beginMs + ev.relBeginMs;
      if (abs >= pos - 100 && abs < pos) {
        var a = new Audio(ev.src);
        audios.push(a);
        a.play().catch(function () {});
      }
    });
  });
  render();
}
function play() { if (!playing) { playing = true; timer = setInterval(tick, 100); } }
function stop() { playing = false; if (timer) clearInterval(timer); stopAudio(); }
function seek(ms) { stop(); pos = ms; render(); }
document.getElementById('play').addEventListener('click', play);
document.getElementById('stop').addEventListener('click', stop);
Array.prototype.forEach.call(document.querySelectorAll('[data-seek]'), function (el) {
  el.addEventListener('click', function (e) {
    e.preventDefault();
    seek(parseInt(el.getAttribute('data-seek'), 10));
  });
});
render();
"""


def export_preview_html(
    lesson: Lesson, timeline: Timeline, layout: LayoutConfig | None = None
) -> str:
    """Render the lesson preview page; byte-deterministic for equal inputs."""
    layout = layout or LayoutConfig()

    segments = []
    for k, seg in enumerate(timeline.segments, start=1):
        events = []
        for ev in seg.events:
            entry = {"kind": ev.kind, "relBeginMs": ev.rel_begin_ms, "spanMs": ev.span_ms}
            if ev.kind in (SHOW_RULE_TEXT, SHOW_EXAMPLE_TEXT):
                node = lesson.node(
                    (ev.rule_id,) if ev.example_id is None else (ev.rule_id, ev.example_id)
                )
                entry["html"] = emit_xhtml(node.text)
            elif ev.kind in (START_RULE_AUDIO, START_EXAMPLE_AUDIO):
                node = lesson.node(
                    (ev.rule_id,) if ev.example_id is None else (ev.rule_id, ev.example_id)
                )
                entry["src"] = resolve_asset(lesson, node.audio.src)
            events.append(entry)
        segments.append(
            {
                "markerId": seg.marker_id,
                "label": index_label(lesson, k, layout),
                "beginMs": seg.begin_ms,
                "durMs": seg.dur_ms,
                "events": events,
            }
        )
    data = {"totalMs": timeline.total_ms, "segments": segments}
    payload = json.dumps(data, sort_keys=True, separators=(",", ":"), ensure_ascii=True)

    index_items = "\n".join(
        f'      <li><a href="#{s["markerId"]}" data-seek="{s["beginMs"]}">{s["label"]}</a></li>'
        for s in segments
    )
    title_html = emit_xhtml(lesson.title)

    return f"""<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8"/>
<title>Lesson preview</title>
<style>
body {{ font-family: sans-serif; margin: 0; }}
#title {{ background: {layout.region_colors["Title"]}; padding: 8px 16px; }}
#main {{ display: flex; }}
#index {{ width: {layout.index_box.width}px; background: {layout.region_colors["Index"]}; min-height: 480px; }}
#index ul {{ list-style: none; padding: 8px; }}
#regions {{ flex: 1; padding: 16px; }}
#regle {{ background: {layout.region_colors["Regle"]}; min-height: 120px; border: 1px solid #CCC; padding: 8px; }}
#exemple {{ background: {layout.region_colors["Exemple"]}; min-height: 200px; border: 1px solid #CCC; padding: 8px; margin-top: 12px; }}
</style>
</head>
<body>
<div id="title">{title_html}</div>
<div id="main">
  <nav id="index">
    <ul>
{index_items}
    </ul>
  </nav>
  <div id="regions">
    <button id="play">Play</button>
    <button id="stop">Stop</button>
    <span id="clock">0.0s</span>
    <div id="regle"></div>
    <div id="exemple"></div>
  </div>
</div>
<script id="lesson-data" type="application/json">{payload}</script>
<script>
{_PLAYER_JS}</script>
</body>
</html>
"""
