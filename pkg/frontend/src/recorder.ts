// Microphone capture to PCM WAV. Uses a plain AudioContext tap so the take
// leaves the browser as uncompressed samples; no codec support needed
// server-side. Browser-only; kept free of DOM types beyond Web Audio.

import { encodeWavPcm16 } from './wav';

export class MicRecorder {
  private context: AudioContext | null = null;
  private processor: ScriptProcessorNode | null = null;
  private source: MediaStreamAudioSourceNode | null = null;
  private stream: MediaStream | null = null;
  private chunks: Float32Array[] = [];

  get recording(): boolean {
    return this.context !== null;
  }

  async start(): Promise<void> {
    if (this.recording) throw new Error('already recording');
    this.stream = await navigator.mediaDevices.getUserMedia({ audio: true });
    this.context = new AudioContext();
    this.source = this.context.createMediaStreamSource(this.stream);
    this.processor = this.context.createScriptProcessor(4096, 1, 1);
    this.chunks = [];
    this.processor.onaudioprocess = (event) => {
      this.chunks.push(new Float32Array(event.inputBuffer.getChannelData(0)));
    };
    this.source.connect(this.processor);
    this.processor.connect(this.context.destination);
  }

  /** Stop capturing and return the take as a mono 16-bit PCM WAV. */
  async stop(): Promise<ArrayBuffer> {
    if (!this.context || !this.processor || !this.source || !this.stream) {
      throw new Error('not recording');
    }
    const sampleRate = this.context.sampleRate;
    this.processor.disconnect();
    this.source.disconnect();
    this.stream.getTracks().forEach((track) => track.stop());
    await this.context.close();
    this.context = null;
    this.processor = null;
    this.source = null;
    this.stream = null;

    const total = this.chunks.reduce((n, c) => n + c.length, 0);
    const samples = new Float32Array(total);
    let offset = 0;
    for (const chunk of this.chunks) {
      samples.set(chunk, offset);
      offset += chunk.length;
    }
    this.chunks = [];
    return encodeWavPcm16([samples], sampleRate);
  }
}
