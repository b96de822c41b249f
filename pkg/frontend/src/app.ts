// DOM wiring for the authoring page. Pure logic lives in the sibling
// modules; this file only renders state and routes events to them.

import { ApiClient, ApiError } from './api';
import { EditorState } from './editor';
import {
  Marker,
  Run,
  applyMarker,
  disallowedChars,
  emitFragment,
  insertText,
  parseFragment,
  plainText,
} from './fragments';
import { activeAt, resolveIndexSeek } from './preview';
import { MicRecorder } from './recorder';
import type { LessonDoc, TimelineDoc } from './types';

interface Selection0 {
  addr: string; // "3" or "3.1"
  start: number;
  end: number;
}

export class App {
  private editor: EditorState;
  private selection: Selection0 | null = null;
  private timeline: TimelineDoc | null = null;
  private playhead = 0;
  private timer: number | null = null;
  private recorder = new MicRecorder();
  private playingAudio: HTMLAudioElement[] = [];

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {
    this.editor = new EditorState(api);
  }

  async start(): Promise<void> {
    await this.editor.load();
    await this.renderPalette();
    this.render();
  }

  private get lesson(): LessonDoc {
    if (!this.editor.lesson) throw new Error('not loaded');
    return this.editor.lesson;
  }

  private toast(message: string): void {
    const el = this.root.querySelector('#toast') as HTMLElement;
    el.textContent = message;
    el.classList.add('visible');
    window.setTimeout(() => el.classList.remove('visible'), 4000);
  }

  private async guard<T>(op: () => Promise<T>): Promise<T | undefined> {
    try {
      return await op();
    } catch (err) {
      this.toast(err instanceof ApiError ? `server: ${err.message}` : String(err));
      this.render();
      return undefined;
    }
  }

  // --- tree + text rendering ---

  private nodeRuns(addr: string): Run[] {
    const [ruleId, exampleId] = addr.split('.').map(Number);
    const rule = this.lesson.rules.find((r) => r.id === ruleId)!;
    const xhtml = exampleId ? rule.examples.find((e) => e.id === exampleId)!.xhtml : rule.xhtml;
    return parseFragment(xhtml).runs;
  }

  private renderRuns(el: HTMLElement, runs: Run[]): void {
    el.textContent = '';
    for (const run of runs) {
      const span = document.createElement('span');
      span.textContent = run.text;
      const m = run.marker;
      if (m) {
        if (m.color) span.style.color = m.color;
        if (m.fontFamily) span.style.fontFamily = m.fontFamily;
        if (m.fontSizePx) span.style.fontSize = `${m.fontSizePx}px`;
        if (m.bold) span.style.fontWeight = 'bold';
        if (m.italic) span.style.fontStyle = 'italic';
      }
      el.appendChild(span);
    }
  }

  private captureSelection(addr: string, textEl: HTMLElement): void {
    const sel = window.getSelection();
    if (!sel || sel.rangeCount === 0) return;
    const range = sel.getRangeAt(0);
    if (!textEl.contains(range.startContainer)) return;
    const pre = range.cloneRange();
    pre.selectNodeContents(textEl);
    pre.setEnd(range.startContainer, range.startOffset);
    const start = pre.toString().length;
    this.selection = { addr, start, end: start + range.toString().length };
  }

  private async editNodeText(addr: string): Promise<void> {
    const current = plainText(this.nodeRuns(addr));
    const next = window.prompt('Text:', current);
    if (next === null) return;
    const bad = disallowedChars(next);
    if (bad.length) {
      this.toast(`disallowed characters at offsets ${bad.map((b) => b.offset).join(', ')}`);
      return;
    }
    await this.guard(() => this.editor.setNodeText(addr, emitFragment([{ text: next }])));
    this.render();
  }

  private async applyMarkerToSelection(marker: Marker | undefined): Promise<void> {
    if (!this.selection || this.selection.start === this.selection.end) {
      this.toast('select some text first');
      return;
    }
    const { addr, start, end } = this.selection;
    const runs = applyMarker(this.nodeRuns(addr), start, end, marker);
    await this.guard(() => this.editor.setNodeText(addr, emitFragment(runs)));
    this.render();
  }

  private async insertPaletteChar(char: string): Promise<void> {
    if (!this.selection) {
      this.toast('place the caret in a text first');
      return;
    }
    const { addr, start } = this.selection;
    const runs = insertText(this.nodeRuns(addr), start, char);
    await this.guard(() => this.editor.setNodeText(addr, emitFragment(runs)));
    this.render();
  }

  private async renderPalette(): Promise<void> {
    const bar = this.root.querySelector('#palette') as HTMLElement;
    const entries = await this.api.getPalette();
    bar.textContent = '';
    for (const entry of entries) {
      const btn = document.createElement('button');
      btn.textContent = entry.char;
      btn.title = entry.name;
      btn.addEventListener('click', () => void this.insertPaletteChar(entry.char));
      bar.appendChild(btn);
    }
  }

  // --- audio panel ---

  private audioBadge(addr: string, holder: HTMLElement): void {
    const [ruleId, exampleId] = addr.split('.').map(Number);
    const rule = this.lesson.rules.find((r) => r.id === ruleId)!;
    const audio = exampleId ? rule.examples.find((e) => e.id === exampleId)!.audio : rule.audio;

    if (audio) {
      const badge = document.createElement('span');
      badge.className = 'badge';
      badge.textContent = `${(audio.durationMs / 1000).toFixed(3)} s`;
      holder.appendChild(badge);
      const replay = document.createElement('button');
      replay.textContent = 'replay';
      replay.addEventListener('click', () => {
        void new Audio(`${this.api['baseUrl'] ?? ''}/${this.lesson.assetBase}${audio.src}`).play();
      });
      holder.appendChild(replay);
      const del = document.createElement('button');
      del.textContent = 'delete audio';
      del.addEventListener('click', async () => {
        await this.guard(() => this.editor.deleteAudio(addr));
        this.render();
      });
      holder.appendChild(del);
    }

    const upload = document.createElement('input');
    upload.type = 'file';
    upload.accept = '.wav,audio/wav';
    upload.addEventListener('change', async () => {
      const file = upload.files?.[0];
      if (!file) return;
      const bytes = await file.arrayBuffer();
      const result = await this.guard(() => this.editor.uploadAudio(addr, bytes));
      if (result) this.toast(`recorded ${(result.durationMs / 1000).toFixed(3)} s`);
      this.render();
    });
    holder.appendChild(upload);

    const rec = document.createElement('button');
    rec.textContent = this.recorder.recording ? 'stop recording' : 'record';
    rec.addEventListener('click', async () => {
      if (!this.recorder.recording) {
        await this.recorder.start();
        rec.textContent = 'stop recording';
        return;
      }
      const wav = await this.recorder.stop();
      const result = await this.guard(() => this.editor.uploadAudio(addr, wav));
      if (result) this.toast(`recorded ${(result.durationMs / 1000).toFixed(3)} s`);
      this.render();
    });
    holder.appendChild(rec);
  }

  // --- preview player ---

  private async refreshTimeline(): Promise<void> {
    this.timeline = (await this.guard(() => this.api.getTimeline())) ?? null;
  }

  private stopPlayback(): void {
    if (this.timer !== null) window.clearInterval(this.timer);
    this.timer = null;
    this.playingAudio.forEach((a) => a.pause());
    this.playingAudio = [];
  }

  private renderPreviewFrame(): void {
    if (!this.timeline) return;
    const regle = this.root.querySelector('#preview-regle') as HTMLElement;
    const exemple = this.root.querySelector('#preview-exemple') as HTMLElement;
    const clock = this.root.querySelector('#preview-clock') as HTMLElement;
    const t = Math.min(this.playhead, this.timeline.totalMs - 1);
    const active = activeAt(this.lesson, this.timeline, t);
    regle.textContent = active.regle.join('\n');
    exemple.textContent = active.exemple.join('\n');
    clock.textContent = `${(t / 1000).toFixed(1)}s / ${(this.timeline.totalMs / 1000).toFixed(1)}s`;
  }

  private startPlayback(): void {
    if (!this.timeline || this.timer !== null) return;
    const step = 100;
    this.timer = window.setInterval(() => {
      const previous = this.playhead;
      this.playhead += step;
      if (this.playhead >= this.timeline!.totalMs) {
        this.stopPlayback();
        this.playhead = 0;
        return;
      }
      for (const seg of this.timeline!.segments) {
        for (const ev of seg.events) {
          if (ev.kind !== 'startRuleAudio' && ev.kind !== 'startExampleAudio') continue;
          const abs = seg.beginMs + ev.relBeginMs;
          if (abs >= previous && abs < this.playhead) {
            const rule = this.lesson.rules.find((r) => r.id === ev.ruleId)!;
            const src =
              ev.exampleId === null
                ? rule.audio?.src
                : rule.examples.find((e) => e.id === ev.exampleId)?.audio?.src;
            if (src) {
              const audio = new Audio(`${this.lesson.assetBase}${src}`);
              this.playingAudio.push(audio);
              void audio.play().catch(() => undefined);
            }
          }
        }
      }
      this.renderPreviewFrame();
    }, step);
  }

  private seek(ms: number): void {
    this.stopPlayback();
    this.playhead = ms;
    this.renderPreviewFrame();
  }

  // --- top-level render ---

  render(): void {
    const tree = this.root.querySelector('#tree') as HTMLElement;
    tree.textContent = '';

    const title = document.createElement('h1');
    this.renderRuns(title, parseFragment(this.lesson.title).runs);
    title.addEventListener('dblclick', async () => {
      const next = window.prompt('Lesson title:', plainText(parseFragment(this.lesson.title).runs));
      if (next === null) return;
      await this.guard(() => this.editor.setTitle(emitFragment([{ text: next }])));
      this.render();
    });
    tree.appendChild(title);

    for (const rule of this.lesson.rules) {
      const ruleEl = document.createElement('section');
      ruleEl.className = 'rule';
      const head = document.createElement('div');
      const label = document.createElement('strong');
      label.textContent = `Rule ${rule.id} `;
      head.appendChild(label);

      const text = document.createElement('span');
      text.className = 'node-text';
      this.renderRuns(text, parseFragment(rule.xhtml).runs);
      text.addEventListener('mouseup', () => this.captureSelection(String(rule.id), text));
      text.addEventListener('dblclick', () => void this.editNodeText(String(rule.id)));
      head.appendChild(text);

      const del = document.createElement('button');
      del.textContent = 'delete rule';
      del.addEventListener('click', async () => {
        const count = this.editor.cascadeCount(rule.id);
        if (!window.confirm(`Deleting this rule removes ${count} item(s). Continue?`)) return;
        await this.guard(() => this.editor.deleteRule(rule.id));
        this.render();
      });
      head.appendChild(del);
      ruleEl.appendChild(head);
      this.audioBadge(String(rule.id), head);

      for (const example of rule.examples) {
        const exEl = document.createElement('div');
        exEl.className = 'example';
        const addr = `${rule.id}.${example.id}`;
        const exText = document.createElement('span');
        exText.className = 'node-text';
        this.renderRuns(exText, parseFragment(example.xhtml).runs);
        exText.addEventListener('mouseup', () => this.captureSelection(addr, exText));
        exText.addEventListener('dblclick', () => void this.editNodeText(addr));
        exEl.appendChild(exText);
        const delEx = document.createElement('button');
        delEx.textContent = 'delete';
        delEx.addEventListener('click', async () => {
          await this.guard(() => this.editor.deleteExample(rule.id, example.id));
          this.render();
        });
        exEl.appendChild(delEx);
        this.audioBadge(addr, exEl);
        ruleEl.appendChild(exEl);
      }

      const addExample = document.createElement('button');
      addExample.textContent = 'add example';
      addExample.addEventListener('click', async () => {
        await this.guard(() =>
          this.editor.addExample(rule.id, emitFragment([{ text: 'New example' }])),
        );
        this.render();
      });
      ruleEl.appendChild(addExample);
      tree.appendChild(ruleEl);
    }

    const addRule = document.createElement('button');
    addRule.textContent = 'add rule';
    addRule.addEventListener('click', async () => {
      await this.guard(() => this.editor.addRule(emitFragment([{ text: 'New rule' }])));
      this.render();
    });
    tree.appendChild(addRule);

    this.renderIndex();
  }

  private renderIndex(): void {
    const index = this.root.querySelector('#preview-index') as HTMLElement;
    index.textContent = '';
    if (!this.timeline) return;
    this.timeline.segments.forEach((seg, i) => {
      const entry = document.createElement('a');
      entry.href = `#${seg.markerId}`;
      entry.textContent = `Rule ${i + 1}`;
      entry.addEventListener('click', (e) => {
        e.preventDefault();
        this.seek(resolveIndexSeek(this.timeline!, seg.markerId));
      });
      index.appendChild(entry);
    });
  }

  bindControls(): void {
    const markerButton = (id: string, marker: Marker | undefined) => {
      (this.root.querySelector(id) as HTMLElement).addEventListener('click', () =>
        void this.applyMarkerToSelection(marker),
      );
    };
    markerButton('#mark-bold', { bold: true });
    markerButton('#mark-italic', { italic: true });
    markerButton('#mark-red', { color: '#FF0000', fontSizePx: 18 });
    markerButton('#mark-clear', undefined);

    (this.root.querySelector('#preview-refresh') as HTMLElement).addEventListener(
      'click',
      async () => {
        await this.refreshTimeline();
        this.renderIndex();
        this.renderPreviewFrame();
      },
    );
    (this.root.querySelector('#preview-play') as HTMLElement).addEventListener('click', () =>
      this.startPlayback(),
    );
    (this.root.querySelector('#preview-stop') as HTMLElement).addEventListener('click', () =>
      this.stopPlayback(),
    );

    (this.root.querySelector('#publish') as HTMLElement).addEventListener('click', async () => {
      const result = await this.guard(() => this.api.compile());
      if (!result) return;
      const blob = new Blob([result.smil], { type: 'application/smil+xml' });
      const link = document.createElement('a');
      link.href = URL.createObjectURL(blob);
      link.download = 'lesson.smil';
      link.click();
      URL.revokeObjectURL(link.href);
    });
  }
}

export function boot(baseUrl = ''): void {
  const root = document.getElementById('app');
  if (!root) throw new Error('#app container missing');
  const app = new App(root, new ApiClient(baseUrl));
  app.bindControls();
  void app.start();
}
