// End-to-end editing round-trip against the real authoring service.
// Gated: needs the Python package installed, so run with
//   RUN_SERVER_TESTS=1 npm test
import { spawn, ChildProcess } from 'node:child_process';
import { mkdtempSync, rmSync } from 'node:fs';
import { tmpdir } from 'node:os';
import { join } from 'node:path';
import { afterAll, beforeAll, describe, expect, it } from 'vitest';

import { ApiClient } from '../src/api';
import { EditorState } from '../src/editor';
import { applyMarker, emitFragment, parseFragment, plainText } from '../src/fragments';
import { encodeWavPcm16 } from '../src/wav';

const PORT = 8765;
const BASE = `http://127.0.0.1:${PORT}`;

let proc: ChildProcess | null = null;
let projectDir = '';

async function waitForServer(): Promise<void> {
  for (let i = 0; i < 100; i++) {
    try {
      const resp = await fetch(`${BASE}/lesson`);
      if (resp.ok) return;
    } catch {
      // not up yet
    }
    await new Promise((r) => setTimeout(r, 100));
  }
  throw new Error('authoring service did not start');
}

describe.skipIf(!process.env.RUN_SERVER_TESTS)('authoring service round-trip', () => {
  beforeAll(async () => {
    projectDir = mkdtempSync(join(tmpdir(), 'phonlesson-ui-'));
    proc = spawn(
      'python3',
      ['-m', 'phonlesson.cli', 'serve', '--project', projectDir, '--port', String(PORT)],
      { stdio: 'ignore' },
    );
    await waitForServer();
  }, 30000);

  afterAll(() => {
    proc?.kill();
    if (projectDir) rmSync(projectDir, { recursive: true, force: true });
  });

  it('persists a mid-word marker and the compiled output keeps the split', async () => {
    const editor = new EditorState(new ApiClient(BASE));
    await editor.load();

    const { id } = await editor.addRule(emitFragment([{ text: 'Watch the vowel' }]));
    const rule = editor.rule(id);
    const marked = applyMarker(parseFragment(rule.xhtml).runs, 1, 2, {
      color: '#FF0000',
      bold: true,
    });
    expect(marked).toHaveLength(3);
    await editor.setNodeText(String(id), emitFragment(marked));

    // a fresh client sees the exact same fragment bytes
    const fresh = new EditorState(new ApiClient(BASE));
    await fresh.load();
    const reloaded = fresh.rule(id).xhtml;
    expect(reloaded).toBe(emitFragment(marked));
    expect(plainText(parseFragment(reloaded).runs)).toBe('Watch the vowel');

    const { smil, timeline } = await new ApiClient(BASE).compile();
    expect(timeline.segments.length).toBeGreaterThan(0);
    expect(smil).toContain('textColor="#FF0000"');
    expect(smil).toContain('textFontWeight="bold"');
    // three-way split survives compilation: plain, marked, plain
    expect(smil).toMatch(/>W<[\s\S]*>a<[\s\S]*>tch the vowel</);
  });

  it('accepts a browser-encoded WAV and reports its duration', async () => {
    const editor = new EditorState(new ApiClient(BASE));
    await editor.load();
    const ruleId = editor.lesson!.rules[0].id;

    const wav = encodeWavPcm16([new Float32Array(16000)], 16000); // 1 s of silence
    const result = await editor.uploadAudio(String(ruleId), wav);
    expect(result.durationMs).toBe(1000);

    const rule = editor.rule(ruleId);
    expect(rule.audio?.durationMs).toBe(1000);
    expect(rule.audio?.src).toBe(result.src);
  });
});
