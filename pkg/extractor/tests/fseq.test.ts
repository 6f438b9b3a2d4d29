import assert from 'node:assert/strict'
import { test } from 'node:test'

import { decodeFseq, encodeFseq } from '../src/fseq'
import { DecodeError } from '../src/errors'

test('header layout is byte-exact', () => {
  const buf = encodeFseq([new Float32Array([0])], 1, 1.0, 'rgb')
  assert.equal(buf.length, 36) // 32-byte header + one f32
  assert.equal(buf.subarray(0, 4).toString('ascii'), 'FSEQ')
  assert.equal(buf.readUInt32LE(4), 1)
  assert.equal(Number(buf.readBigUInt64LE(8)), 1)
  assert.equal(Number(buf.readBigUInt64LE(16)), 1)
  assert.equal(buf.readFloatLE(24), 1.0)
  assert.equal(buf.readUInt8(28), 0)
  assert.deepEqual(Array.from(buf.subarray(29, 32)), [0, 0, 0])
})

test('round-trips values and metadata', () => {
  const rows = [new Float32Array([0.25, 0.5, 1]), new Float32Array([0, 0.75, 0.125])]
  const buf = encodeFseq(rows, 3, 2.0, 'flow')
  const back = decodeFseq(buf)
  assert.equal(back.t, 2)
  assert.equal(back.dim, 3)
  assert.equal(back.fps, 2.0)
  assert.equal(back.stream, 'flow')
  assert.deepEqual(Array.from(back.values), [0.25, 0.5, 1, 0, 0.75, 0.125])
})

test('rejects ragged rows and non-finite values', () => {
  assert.throws(() => encodeFseq([new Float32Array(2), new Float32Array(3)], 2, 1, 'rgb'), DecodeError)
  assert.throws(() => encodeFseq([new Float32Array([Infinity])], 1, 1, 'rgb'), DecodeError)
})
