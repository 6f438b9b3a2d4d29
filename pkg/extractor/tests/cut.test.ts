import assert from 'node:assert/strict'
import * as fs from 'node:fs'
import * as os from 'node:os'
import * as path from 'node:path'
import { test } from 'node:test'

import { cutSummary, SummaryDoc } from '../src/cut'
import { clipBuffer, movingSquareClip } from './helpers'

function writeClip(frames: number): string {
  const dir = fs.mkdtempSync(path.join(os.tmpdir(), 'cut-'))
  const file = path.join(dir, 'clip.y4m')
  fs.writeFileSync(file, clipBuffer(movingSquareClip(64, 48, frames)))
  return file
}

function summary(shots: [number, number][], nFrames: number, budget: number): SummaryDoc {
  return { video_id: 'clip', n_frames: nFrames, budget_frames: budget, shots }
}

test('full-video summary keeps the whole duration', () => {
  const clip = writeClip(60)
  const cut = cutSummary(clip, summary([[0, 60]], 60, 60))
  assert.ok(Math.abs(cut.frames.length - 60) <= 1)
})

test('empty summary errors unless explicitly allowed', () => {
  const clip = writeClip(20)
  assert.throws(() => cutSummary(clip, summary([], 20, 3)), { name: 'DecodeError' })
  const cut = cutSummary(clip, summary([], 20, 3), { summaryFps: 0, allowEmpty: true })
  assert.equal(cut.frames.length, 0)
})

test('budgeted summary stays within 15% plus one frame', () => {
  const frames = 200
  const clip = writeClip(frames)
  const budget = Math.floor(0.15 * frames)
  const cut = cutSummary(clip, summary([[10, 20], [50, 60], [120, 130]], frames, budget))
  assert.ok(cut.frames.length <= 0.15 * frames + 1)
  assert.equal(cut.frames.length, 30) // sum of shot lengths exactly
})

test('subsampled timeline maps back to source frames', () => {
  const clip = writeClip(120) // 4 s at 30 fps; scored timeline at 2 fps has 8 frames
  const cut = cutSummary(clip, summary([[2, 5]], 8, 4), { summaryFps: 2, allowEmpty: false })
  assert.equal(cut.frames.length, Math.round(5 * 15) - Math.round(2 * 15))
})

test('out-of-range shot is rejected', () => {
  const clip = writeClip(30)
  assert.throws(() => cutSummary(clip, summary([[40, 50]], 30, 10)), { name: 'DecodeError' })
})
