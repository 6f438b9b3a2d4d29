import assert from 'node:assert/strict'
import { test } from 'node:test'

import { parseY4m, writeY4m, fps } from '../src/y4m'
import { DecodeError } from '../src/errors'
import { clipBuffer, movingSquareClip } from './helpers'

test('round-trips a clip', () => {
  const clip = movingSquareClip(32, 24, 5)
  const back = parseY4m(clipBuffer(clip))
  assert.equal(back.width, 32)
  assert.equal(back.height, 24)
  assert.equal(back.frames.length, 5)
  assert.equal(fps(back), 30)
  assert.deepEqual(Array.from(back.frames[2].y), Array.from(clip.frames[2].y))
})

test('rejects bad magic', () => {
  const data = clipBuffer(movingSquareClip(16, 16, 1))
  data.write('XUV4MPEG2', 0, 'ascii')
  assert.throws(() => parseY4m(data), DecodeError)
})

test('rejects truncated payload', () => {
  const data = clipBuffer(movingSquareClip(16, 16, 2))
  assert.throws(() => parseY4m(data.subarray(0, data.length - 10)), DecodeError)
})

test('rejects unsupported colorspace', () => {
  const header = Buffer.from('YUV4MPEG2 W16 H16 F30:1 C422\n', 'ascii')
  assert.throws(() => parseY4m(header), DecodeError)
})

test('writer emits parseable headers for 444', () => {
  const size = 8
  const frame = {
    y: new Uint8Array(size * size).fill(100),
    u: new Uint8Array(size * size).fill(128),
    v: new Uint8Array(size * size).fill(128),
  }
  const buf = writeY4m({ width: size, height: size, fpsNum: 25, fpsDen: 1, colorspace: 'C444', frames: [frame] })
  const back = parseY4m(buf)
  assert.equal(back.colorspace, 'C444')
  assert.equal(back.frames[0].u.length, size * size)
})
