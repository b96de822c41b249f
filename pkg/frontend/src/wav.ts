// PCM WAV encoding for microphone takes. The browser records Float32
// samples; the server only accepts uncompressed PCM, so conversion happens
// client-side before upload.

export function encodeWavPcm16(
  channels: Float32Array[],
  sampleRateHz: number,
): ArrayBuffer {
  if (!channels.length || !channels[0].length) throw new Error('no samples');
  const channelCount = channels.length;
  const frames = channels[0].length;
  const blockAlign = channelCount * 2;
  const dataSize = frames * blockAlign;
  const buffer = new ArrayBuffer(44 + dataSize);
  const view = new DataView(buffer);

  const writeTag = (offset: number, tag: string) => {
    for (let i = 0; i < 4; i++) view.setUint8(offset + i, tag.charCodeAt(i));
  };

  writeTag(0, 'RIFF');
  view.setUint32(4, 36 + dataSize, true);
  writeTag(8, 'WAVE');
  writeTag(12, 'fmt ');
  view.setUint32(16, 16, true);
  view.setUint16(20, 1, true); // PCM
  view.setUint16(22, channelCount, true);
  view.setUint32(24, sampleRateHz, true);
  view.setUint32(28, sampleRateHz * blockAlign, true);
  view.setUint16(32, blockAlign, true);
  view.setUint16(34, 16, true);
  writeTag(36, 'data');
  view.setUint32(40, dataSize, true);

  let offset = 44;
  for (let frame = 0; frame < frames; frame++) {
    for (let ch = 0; ch < channelCount; ch++) {
      const clamped = Math.max(-1, Math.min(1, channels[ch][frame]));
      view.setInt16(offset, Math.round(clamped * 0x7fff), true);
      offset += 2;
    }
  }
  return buffer;
}

export interface WavInfo {
  sampleRateHz: number;
  channels: number;
  bitsPerSample: number;
  durationMs: number;
}

/** Minimal header reader; mirrors what the server probe reports. */
export function readWavHeader(buffer: ArrayBuffer): WavInfo {
  const view = new DataView(buffer);
  const tag = (offset: number) =>
    String.fromCharCode(...new Uint8Array(buffer, offset, 4));
  if (tag(0) !== 'RIFF' || tag(8) !== 'WAVE') throw new Error('not a RIFF/WAVE file');

  let pos = 12;
  let fmt: { rate: number; channels: number; bits: number } | null = null;
  let dataSize: number | null = null;
  while (pos + 8 <= view.byteLength && dataSize === null) {
    const id = tag(pos);
    const size = view.getUint32(pos + 4, true);
    if (id === 'fmt ') {
      fmt = {
        channels: view.getUint16(pos + 10, true),
        rate: view.getUint32(pos + 12, true),
        bits: view.getUint16(pos + 22, true),
      };
    } else if (id === 'data') {
      dataSize = size;
    }
    pos += 8 + size + (size & 1);
  }
  if (!fmt || dataSize === null) throw new Error('missing fmt or data chunk');
  const byteRate = (fmt.rate * fmt.channels * fmt.bits) / 8;
  return {
    sampleRateHz: fmt.rate,
    channels: fmt.channels,
    bitsPerSample: fmt.bits,
    durationMs: Math.floor((1000 * dataSize) / byteRate),
  };
}
