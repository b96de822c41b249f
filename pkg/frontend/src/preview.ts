// Preview engine: pure functions over the timeline JSON (one source of
// truth; no SMIL parsing in the browser). The visible/playing set at time t
// must agree with the compiler's simulator for the same project.

import { parseFragment, plainText } from './fragments';
import type { LessonDoc, TimelineDoc, TimelineSegment } from './types';

export interface ActiveSet {
  regle: string[];
  exemple: string[];
  audio: string[];
}

function joinAsset(assetBase: string, src: string): string {
  const base = assetBase.replace(/\/+$/, '');
  return base ? `${base}/${src}` : src;
}

function nodeText(lesson: LessonDoc, ruleId: number, exampleId: number | null): string {
  const rule = lesson.rules.find((r) => r.id === ruleId);
  if (!rule) throw new Error(`unknown rule ${ruleId}`);
  if (exampleId === null) return plainText(parseFragment(rule.xhtml).runs);
  const example = rule.examples.find((e) => e.id === exampleId);
  if (!example) throw new Error(`unknown example ${ruleId}.${exampleId}`);
  return plainText(parseFragment(example.xhtml).runs);
}

function nodeAudioSrc(lesson: LessonDoc, ruleId: number, exampleId: number | null): string {
  const rule = lesson.rules.find((r) => r.id === ruleId);
  if (!rule) throw new Error(`unknown rule ${ruleId}`);
  const audio = exampleId === null ? rule.audio : rule.examples.find((e) => e.id === exampleId)?.audio;
  if (!audio) throw new Error(`no audio on ${ruleId}.${exampleId ?? ''}`);
  return joinAsset(lesson.assetBase, audio.src);
}

export function segmentAt(timeline: TimelineDoc, tMs: number): TimelineSegment | null {
  for (const seg of timeline.segments) {
    if (tMs >= seg.beginMs && tMs < seg.beginMs + seg.durMs) return seg;
  }
  return null;
}

/** Everything visible or audible at t; intervals are half-open [begin, end). */
export function activeAt(lesson: LessonDoc, timeline: TimelineDoc, tMs: number): ActiveSet {
  if (tMs < 0 || tMs >= timeline.totalMs) {
    throw new RangeError(`t=${tMs} outside [0, ${timeline.totalMs})`);
  }
  const active: ActiveSet = { regle: [], exemple: [], audio: [] };
  const seg = segmentAt(timeline, tMs);
  if (!seg) return active;
  const rel = tMs - seg.beginMs;
  for (const ev of seg.events) {
    if (rel < ev.relBeginMs || rel >= ev.relBeginMs + ev.spanMs) continue;
    if (ev.kind === 'showRuleText') {
      active.regle.push(nodeText(lesson, ev.ruleId, null));
    } else if (ev.kind === 'showExampleText') {
      active.exemple.push(nodeText(lesson, ev.ruleId, ev.exampleId));
    } else {
      active.audio.push(nodeAudioSrc(lesson, ev.ruleId, ev.exampleId));
    }
  }
  return active;
}

/** Index-entry click: seek to the begin of the segment with this marker. */
export function resolveIndexSeek(timeline: TimelineDoc, markerId: string): number {
  const seg = timeline.segments.find((s) => s.markerId === markerId);
  if (!seg) throw new Error(`no segment ${markerId}`);
  return seg.beginMs;
}

export interface TraceSample extends ActiveSet {
  tMs: number;
}

/** Export the active sets at the given instants (fidelity checks). */
export function exportTrace(lesson: LessonDoc, timeline: TimelineDoc, times: number[]): TraceSample[] {
  return times.map((tMs) => ({ tMs, ...activeAt(lesson, timeline, tMs) }));
}

/** Default fidelity probe points: 0, segment boundaries +/- 1 ms, mid-example. */
export function defaultTraceTimes(timeline: TimelineDoc): number[] {
  const times = new Set<number>([0]);
  const boundaries = timeline.segments.map((s) => s.beginMs).concat([timeline.totalMs]);
  for (const b of boundaries) {
    for (const t of [b - 1, b, b + 1]) {
      if (t >= 0 && t < timeline.totalMs) times.add(t);
    }
  }
  for (const seg of timeline.segments) {
    for (const ev of seg.events) {
      if (ev.kind === 'startExampleAudio') {
        times.add(seg.beginMs + ev.relBeginMs + Math.floor(ev.spanMs / 2));
      }
    }
  }
  return [...times].sort((a, b) => a - b);
}
