// Thin typed client for the authoring service. Every mutation carries the
// current revision in If-Match; the server answers 409 when it is stale.

import type { LessonDoc, NodeAddr, PaletteEntry, TimelineDoc } from './types';

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: typeof fetch = fetch,
  ) {}

  private async request<T>(
    method: string,
    path: string,
    options: { revision?: number; json?: unknown; body?: BodyInit; contentType?: string } = {},
  ): Promise<T> {
    const headers: Record<string, string> = {};
    if (options.revision !== undefined) headers['If-Match'] = String(options.revision);
    let body = options.body;
    if (options.json !== undefined) {
      headers['Content-Type'] = 'application/json';
      body = JSON.stringify(options.json);
    } else if (options.contentType) {
      headers['Content-Type'] = options.contentType;
    }
    const resp = await this.fetchImpl(this.baseUrl + path, { method, headers, body });
    if (!resp.ok) {
      let detail = resp.statusText;
      try {
        const doc = await resp.json();
        if (doc && typeof doc.detail === 'string') detail = doc.detail;
      } catch {
        // keep the status text
      }
      throw new ApiError(resp.status, detail);
    }
    return (await resp.json()) as T;
  }

  getLesson(): Promise<LessonDoc> {
    return this.request('GET', '/lesson');
  }

  getPalette(): Promise<PaletteEntry[]> {
    return this.request('GET', '/palette');
  }

  getTimeline(): Promise<TimelineDoc> {
    return this.request('GET', '/timeline');
  }

  putTitle(fragment: string, revision: number): Promise<{ revision: number }> {
    return this.request('PUT', '/lesson/title', {
      revision,
      body: fragment,
      contentType: 'application/xhtml+xml',
    });
  }

  addRule(
    xhtml: string,
    revision: number,
    position?: number,
  ): Promise<{ id: number; revision: number }> {
    return this.request('POST', '/rules', { revision, json: { xhtml, position } });
  }

  deleteRule(ruleId: number, revision: number): Promise<{ removed: number; revision: number }> {
    return this.request('DELETE', `/rules/${ruleId}`, { revision });
  }

  addExample(
    ruleId: number,
    xhtml: string,
    revision: number,
  ): Promise<{ id: number; revision: number }> {
    return this.request('POST', `/rules/${ruleId}/examples`, { revision, json: { xhtml } });
  }

  deleteExample(
    ruleId: number,
    exampleId: number,
    revision: number,
  ): Promise<{ removed: number; revision: number }> {
    return this.request('DELETE', `/rules/${ruleId}/examples/${exampleId}`, { revision });
  }

  putNodeText(addr: NodeAddr, fragment: string, revision: number): Promise<{ revision: number }> {
    return this.request('PUT', `/nodes/${addr}/text`, {
      revision,
      body: fragment,
      contentType: 'application/xhtml+xml',
    });
  }

  uploadAudio(
    addr: NodeAddr,
    wavBytes: ArrayBuffer | Uint8Array,
    revision: number,
  ): Promise<{ src: string; durationMs: number; revision: number }> {
    return this.request('POST', `/nodes/${addr}/audio`, {
      revision,
      body: wavBytes as BodyInit,
      contentType: 'audio/wav',
    });
  }

  deleteAudio(addr: NodeAddr, revision: number): Promise<{ revision: number }> {
    return this.request('DELETE', `/nodes/${addr}/audio`, { revision });
  }

  compile(): Promise<{ smil: string; timeline: TimelineDoc }> {
    return this.request('POST', '/compile');
  }
}
