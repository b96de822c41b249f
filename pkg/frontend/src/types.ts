// Wire types for the authoring HTTP API (JSON bodies, UTF-8).

export interface AudioRef {
  src: string;
  durationMs: number;
}

export interface ExampleDoc {
  id: number;
  xhtml: string;
  audio: AudioRef | null;
}

export interface RuleDoc {
  id: number;
  xhtml: string;
  audio: AudioRef | null;
  examples: ExampleDoc[];
}

export interface TimingDoc {
  leadInMs: number;
  interGapMs: number;
  tailMs: number;
  defaultDisplayMs: number;
}

export interface LessonDoc {
  revision: number;
  assetBase: string;
  title: string;
  timing: TimingDoc;
  rules: RuleDoc[];
}

export type EventKind =
  | 'showRuleText'
  | 'startRuleAudio'
  | 'showExampleText'
  | 'startExampleAudio';

export interface TimelineEvent {
  kind: EventKind;
  ruleId: number;
  exampleId: number | null;
  relBeginMs: number;
  spanMs: number;
}

export interface TimelineSegment {
  markerId: string;
  beginMs: number;
  durMs: number;
  events: TimelineEvent[];
}

export interface TimelineDoc {
  totalMs: number;
  segments: TimelineSegment[];
}

export interface PaletteEntry {
  char: string;
  name: string;
}

/** Node address as the API paths expect it: "3" (rule) or "3.1" (example). */
export type NodeAddr = string;
