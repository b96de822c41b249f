// The XHTML fragment dialect the server speaks: one <p> wrapping <span>
// elements, <br/> for newlines, style limited to color / font-family /
// font-size / font-weight / font-style. The editor builds fragments from
// runs and parses server fragments back; both directions must agree with
// the server byte-for-byte, so emission order and escaping are fixed.

export interface Marker {
  color?: string;
  fontFamily?: string;
  fontSizePx?: number;
  bold?: boolean;
  italic?: boolean;
}

export interface Run {
  text: string;
  marker?: Marker;
}

function normalizeMarker(marker?: Marker): Marker | undefined {
  if (!marker) return undefined;
  const m: Marker = {};
  if (marker.color) m.color = marker.color.toUpperCase();
  if (marker.fontFamily) m.fontFamily = marker.fontFamily;
  if (marker.fontSizePx !== undefined) m.fontSizePx = marker.fontSizePx;
  if (marker.bold) m.bold = true;
  if (marker.italic) m.italic = true;
  return Object.keys(m).length ? m : undefined;
}

function sameMarker(a?: Marker, b?: Marker): boolean {
  if (!a || !b) return a === b || (!a && !b);
  return (
    a.color === b.color &&
    a.fontFamily === b.fontFamily &&
    a.fontSizePx === b.fontSizePx &&
    !!a.bold === !!b.bold &&
    !!a.italic === !!b.italic
  );
}

/** Drop empty runs, merge adjacent equal-marker runs, uppercase colors. */
export function canonicalize(runs: Run[]): Run[] {
  const out: Run[] = [];
  for (const run of runs) {
    if (!run.text) continue;
    const marker = normalizeMarker(run.marker);
    const last = out[out.length - 1];
    if (last && sameMarker(last.marker, marker)) {
      last.text += run.text;
    } else {
      out.push({ text: run.text, marker });
    }
  }
  return out;
}

export function plainText(runs: Run[]): string {
  return runs.map((r) => r.text).join('');
}

function escapeText(text: string): string {
  return text.replace(/&/g, '&amp;').replace(/</g, '&lt;').replace(/>/g, '&gt;');
}

function escapeAttr(text: string): string {
  return escapeText(text).replace(/"/g, '&quot;');
}

function unescape(text: string): string {
  return text
    .replace(/&lt;/g, '<')
    .replace(/&gt;/g, '>')
    .replace(/&quot;/g, '"')
    .replace(/&amp;/g, '&');
}

function markerStyle(m: Marker): string {
  const props: string[] = [];
  if (m.color) props.push(`color:${m.color}`);
  if (m.fontFamily) props.push(`font-family:${m.fontFamily}`);
  if (m.fontSizePx !== undefined) props.push(`font-size:${m.fontSizePx}px`);
  if (m.bold) props.push('font-weight:bold');
  if (m.italic) props.push('font-style:italic');
  return props.join(';');
}

/** Serialize canonical runs to the fragment the server accepts. */
export function emitFragment(runs: Run[]): string {
  const spans = canonicalize(runs).map((run) => {
    const body = escapeText(run.text).replace(/\n/g, '<br/>');
    if (!run.marker) return `<span>${body}</span>`;
    return `<span style="${escapeAttr(markerStyle(run.marker))}">${body}</span>`;
  });
  return `<p>${spans.join('')}</p>`;
}

function parseStyle(style: string): { marker: Marker; warnings: string[] } {
  const marker: Marker = {};
  const warnings: string[] = [];
  for (const piece of style.split(';')) {
    if (!piece.trim()) continue;
    const idx = piece.indexOf(':');
    if (idx < 0) {
      warnings.push(`malformed style property: ${piece}`);
      continue;
    }
    const prop = piece.slice(0, idx).trim().toLowerCase();
    const value = piece.slice(idx + 1).trim();
    if (prop === 'color') marker.color = value;
    else if (prop === 'font-family') marker.fontFamily = value;
    else if (prop === 'font-size') marker.fontSizePx = parseInt(value, 10);
    else if (prop === 'font-weight') marker.bold = value === 'bold';
    else if (prop === 'font-style') marker.italic = value === 'italic';
    else warnings.push(`unknown style property: ${prop}`);
  }
  return { marker, warnings };
}

const SPAN_RE = /<span(?:\s+style="([^"]*)")?>((?:[^<]|<br\/>)*)<\/span>|<br\/>/g;

/** Parse a server fragment back to runs. Throws on anything outside the dialect. */
export function parseFragment(fragment: string): { runs: Run[]; warnings: string[] } {
  const m = fragment.trim().match(/^<p>([\s\S]*)<\/p>$/);
  if (!m) throw new Error(`fragment is not a single <p>: ${fragment}`);
  const inner = m[1];
  const runs: Run[] = [];
  const warnings: string[] = [];
  let consumed = 0;
  SPAN_RE.lastIndex = 0;
  let match: RegExpExecArray | null;
  while ((match = SPAN_RE.exec(inner)) !== null) {
    const between = inner.slice(consumed, match.index);
    if (between) runs.push({ text: unescape(between) });
    consumed = match.index + match[0].length;
    if (match[0] === '<br/>') {
      runs.push({ text: '\n' });
      continue;
    }
    const [, style, body] = match;
    let marker: Marker | undefined;
    if (style !== undefined) {
      const parsed = parseStyle(unescape(style));
      marker = parsed.marker;
      warnings.push(...parsed.warnings);
    }
    const text = unescape(body.replace(/<br\/>/g, '\n'));
    runs.push({ text, marker });
  }
  const tail = inner.slice(consumed);
  if (tail.includes('<')) throw new Error(`disallowed markup in fragment: ${tail}`);
  if (tail) runs.push({ text: unescape(tail) });
  return { runs: canonicalize(runs), warnings };
}

/** Split runs at a plain-text offset, returning [index, offsetWithinRun]. */
function splitAt(runs: Run[], offset: number): Run[] {
  const out: Run[] = [];
  let pos = 0;
  for (const run of runs) {
    const end = pos + run.text.length;
    if (offset > pos && offset < end) {
      out.push({ text: run.text.slice(0, offset - pos), marker: run.marker });
      out.push({ text: run.text.slice(offset - pos), marker: run.marker });
    } else {
      out.push({ ...run });
    }
    pos = end;
  }
  return out;
}

/**
 * Apply a marker to the [start, end) plain-text range; marking the middle of
 * a word yields the three-run split the compiled presentation preserves.
 * Passing undefined clears markers over the range.
 */
export function applyMarker(
  runs: Run[],
  start: number,
  end: number,
  marker: Marker | undefined,
): Run[] {
  if (start >= end) return canonicalize(runs);
  const split = splitAt(splitAt(runs, start), end);
  let pos = 0;
  const out = split.map((run) => {
    const covered = pos >= start && pos + run.text.length <= end;
    pos += run.text.length;
    return covered ? { text: run.text, marker } : run;
  });
  return canonicalize(out);
}

/** Insert text (e.g. an IPA palette character) at a plain-text caret offset. */
export function insertText(runs: Run[], offset: number, text: string): Run[] {
  if (!runs.length) return canonicalize([{ text }]);
  const split = splitAt(runs, offset);
  const out: Run[] = [];
  let pos = 0;
  let inserted = false;
  for (const run of split) {
    if (!inserted && pos >= offset) {
      // inherit the marker of the run the caret sits in front of
      out.push({ text, marker: run.marker });
      inserted = true;
    }
    out.push(run);
    pos += run.text.length;
  }
  if (!inserted) out.push({ text, marker: split[split.length - 1]?.marker });
  return canonicalize(out);
}

// Characters the server accepts: printable ASCII, newline, Latin-1 text,
// IPA and modifier/diacritic blocks, general punctuation.
export function disallowedChars(text: string): { offset: number; codePoint: number }[] {
  const bad: { offset: number; codePoint: number }[] = [];
  for (let i = 0; i < text.length; i++) {
    const cp = text.codePointAt(i)!;
    const ok =
      cp === 0x0a ||
      (cp >= 0x20 && cp <= 0x7e) ||
      (cp >= 0xa0 && cp <= 0xff) ||
      (cp >= 0x0250 && cp <= 0x02ff) ||
      (cp >= 0x0300 && cp <= 0x036f) ||
      (cp >= 0x2000 && cp <= 0x206f);
    if (!ok) bad.push({ offset: i, codePoint: cp });
  }
  return bad;
}
