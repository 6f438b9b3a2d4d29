/**
 * FSEQ1 feature-file format, byte-compatible with the main pipeline:
 * magic "FSEQ" | u32 version=1 | u64 T | u64 D | f32 fps | u8 stream
 * (0 rgb, 1 flow) | 3 zero pad bytes | T*D float32 row-major, all
 * little-endian.
 */

import { DecodeError } from './errors'

const MAGIC = Buffer.from('FSEQ', 'ascii')
const HEADER_SIZE = 32

export type StreamKind = 'rgb' | 'flow'

export function encodeFseq(frames: Float32Array[], dim: number, fps: number, stream: StreamKind): Buffer {
  const t = frames.length
  if (t < 1 || dim < 1) throw new DecodeError(`need at least one frame and one dimension, got ${t}x${dim}`)
  const buf = Buffer.alloc(HEADER_SIZE + 4 * t * dim)
  MAGIC.copy(buf, 0)
  buf.writeUInt32LE(1, 4)
  buf.writeBigUInt64LE(BigInt(t), 8)
  buf.writeBigUInt64LE(BigInt(dim), 16)
  buf.writeFloatLE(fps, 24)
  buf.writeUInt8(stream === 'rgb' ? 0 : 1, 28)
  let offset = HEADER_SIZE
  for (const row of frames) {
    if (row.length !== dim) throw new DecodeError(`row has ${row.length} values, expected ${dim}`)
    for (const value of row) {
      if (!Number.isFinite(value)) throw new DecodeError('non-finite feature value')
      buf.writeFloatLE(value, offset)
      offset += 4
    }
  }
  return buf
}

export interface FseqContent {
  t: number
  dim: number
  fps: number
  stream: StreamKind
  values: Float32Array
}

export function decodeFseq(buf: Buffer): FseqContent {
  if (buf.length < HEADER_SIZE) throw new DecodeError('truncated header')
  if (!buf.subarray(0, 4).equals(MAGIC)) throw new DecodeError('bad magic')
  if (buf.readUInt32LE(4) !== 1) throw new DecodeError('unsupported version')
  const t = Number(buf.readBigUInt64LE(8))
  const dim = Number(buf.readBigUInt64LE(16))
  const fps = buf.readFloatLE(24)
  const streamCode = buf.readUInt8(28)
  if (buf.length !== HEADER_SIZE + 4 * t * dim) throw new DecodeError('payload size mismatch')
  const values = new Float32Array(t * dim)
  for (let i = 0; i < values.length; i++) values[i] = buf.readFloatLE(HEADER_SIZE + 4 * i)
  return { t, dim, fps, stream: streamCode === 0 ? 'rgb' : 'flow', values }
}
