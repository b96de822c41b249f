// Editor session state: a lesson snapshot plus its revision, with every
// mutation sent under optimistic concurrency. On a 409 the snapshot is
// refreshed and the mutation retried once against the new revision.

import { ApiClient, ApiError } from './api';
import type { LessonDoc, NodeAddr, RuleDoc } from './types';

export class EditorState {
  lesson: LessonDoc | null = null;

  constructor(private api: ApiClient) {}

  get revision(): number {
    if (!this.lesson) throw new Error('editor not loaded');
    return this.lesson.revision;
  }

  async load(): Promise<LessonDoc> {
    this.lesson = await this.api.getLesson();
    return this.lesson;
  }

  rule(ruleId: number): RuleDoc {
    const rule = this.lesson?.rules.find((r) => r.id === ruleId);
    if (!rule) throw new Error(`unknown rule ${ruleId}`);
    return rule;
  }

  /** Nodes a delete-rule confirmation dialog should report (rule + examples). */
  cascadeCount(ruleId: number): number {
    return 1 + this.rule(ruleId).examples.length;
  }

  private async mutate<T extends { revision: number }>(
    op: (revision: number) => Promise<T>,
  ): Promise<T> {
    if (!this.lesson) await this.load();
    try {
      const result = await op(this.revision);
      await this.load();
      return result;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        await this.load(); // refresh, then retry once against the new revision
        const result = await op(this.revision);
        await this.load();
        return result;
      }
      throw err;
    }
  }

  setTitle(fragment: string) {
    return this.mutate((rev) => this.api.putTitle(fragment, rev));
  }

  addRule(xhtml: string, position?: number) {
    return this.mutate((rev) => this.api.addRule(xhtml, rev, position));
  }

  deleteRule(ruleId: number) {
    return this.mutate((rev) => this.api.deleteRule(ruleId, rev));
  }

  addExample(ruleId: number, xhtml: string) {
    return this.mutate((rev) => this.api.addExample(ruleId, xhtml, rev));
  }

  deleteExample(ruleId: number, exampleId: number) {
    return this.mutate((rev) => this.api.deleteExample(ruleId, exampleId, rev));
  }

  setNodeText(addr: NodeAddr, fragment: string) {
    return this.mutate((rev) => this.api.putNodeText(addr, fragment, rev));
  }

  uploadAudio(addr: NodeAddr, wavBytes: ArrayBuffer | Uint8Array) {
    return this.mutate((rev) => this.api.uploadAudio(addr, wavBytes, rev));
  }

  deleteAudio(addr: NodeAddr) {
    return this.mutate((rev) => this.api.deleteAudio(addr, rev));
  }
}
