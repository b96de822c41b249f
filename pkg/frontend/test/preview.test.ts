import { readFileSync } from 'node:fs';
import { join } from 'node:path';
import { describe, expect, it } from 'vitest';

import {
  activeAt,
  defaultTraceTimes,
  exportTrace,
  resolveIndexSeek,
  segmentAt,
  TraceSample,
} from '../src/preview';
import type { LessonDoc, TimelineDoc } from '../src/types';

const read = (name: string) =>
  JSON.parse(readFileSync(join(__dirname, 'fixtures', name), 'utf-8'));

const lesson: LessonDoc = read('lesson.json');
const timeline: TimelineDoc = read('timeline.json');
const samples: TraceSample[] = read('active_samples.json');

describe('preview fidelity', () => {
  it('reports the same active set as the compiler at every sampled instant', () => {
    for (const sample of samples) {
      const active = activeAt(lesson, timeline, sample.tMs);
      expect({ tMs: sample.tMs, ...active }).toEqual(sample);
    }
  });

  it('treats activation intervals as half-open at segment and audio ends', () => {
    // rule audio: begin 1000ms, span 9000ms -> still playing at 9999, gone at 10000
    expect(activeAt(lesson, timeline, 9999).audio).toEqual(['audio/Regle 1.wav']);
    expect(activeAt(lesson, timeline, 10000).audio).toEqual([]);
    expect(() => activeAt(lesson, timeline, timeline.totalMs)).toThrow(RangeError);
    expect(() => activeAt(lesson, timeline, -1)).toThrow(RangeError);
  });

  it('keeps earlier example texts visible until the segment ends', () => {
    const last = activeAt(lesson, timeline, timeline.totalMs - 1);
    expect(last.exemple).toEqual(['Watch', 'Bath']);
  });
});

describe('timeline navigation', () => {
  it('finds the segment covering an instant', () => {
    expect(segmentAt(timeline, 0)?.markerId).toBe(timeline.segments[0].markerId);
    expect(segmentAt(timeline, timeline.totalMs)).toBeNull();
  });

  it('resolves index entries to their segment begin', () => {
    for (const seg of timeline.segments) {
      expect(resolveIndexSeek(timeline, seg.markerId)).toBe(seg.beginMs);
    }
    expect(() => resolveIndexSeek(timeline, 'nope')).toThrow();
  });
});

describe('trace export', () => {
  it('samples 0, boundaries +/- 1 and mid-example instants, all in range', () => {
    const times = defaultTraceTimes(timeline);
    expect(times[0]).toBe(0);
    expect(times).toContain(timeline.totalMs - 1);
    expect(times.every((t) => t >= 0 && t < timeline.totalMs)).toBe(true);
    expect([...times].sort((a, b) => a - b)).toEqual(times);
  });

  it('produces one sample per requested instant', () => {
    const trace = exportTrace(lesson, timeline, [0, 12000]);
    expect(trace.map((s) => s.tMs)).toEqual([0, 12000]);
    expect(trace[1].audio).toEqual(['audio/Exemple1_R1.wav']);
  });
});
