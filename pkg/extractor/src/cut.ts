/**
 * Render a key-shot summary by concatenating the selected intervals of the
 * source clip. Summary shots are frame intervals on the scored timeline;
 * when that timeline was subsampled (e.g. scored at 2 fps), pass its rate
 * so the indices can be mapped back to source frames.
 */

import * as fs from 'fs'

import { DecodeError, IoError } from './errors'
import { fps as videoFps, parseY4m, Y4mVideo } from './y4m'

export interface SummaryDoc {
  video_id: string
  n_frames: number
  budget_frames: number
  shots: [number, number][]
}

export function readSummary(path: string): SummaryDoc {
  let doc: unknown
  try {
    doc = JSON.parse(fs.readFileSync(path, 'utf-8'))
  } catch (err) {
    if (err instanceof SyntaxError) throw new DecodeError(`${path}: invalid JSON`)
    throw new IoError(`cannot read ${path}: ${err}`)
  }
  const d = doc as SummaryDoc
  if (!Array.isArray(d.shots) || typeof d.n_frames !== 'number') {
    throw new DecodeError(`${path}: not a summary document`)
  }
  return d
}

export interface CutOptions {
  /** frame rate of the summary's timeline; 0 means source-frame indices */
  summaryFps: number
  allowEmpty: boolean
}

export function cutSummary(videoPath: string, summary: SummaryDoc,
                           options: CutOptions = { summaryFps: 0, allowEmpty: false }): Y4mVideo {
  let data: Buffer
  try {
    data = fs.readFileSync(videoPath)
  } catch (err) {
    throw new IoError(`cannot read ${videoPath}: ${err}`)
  }
  const video = parseY4m(data)
  const srcFps = videoFps(video)
  const scale = options.summaryFps > 0 ? srcFps / options.summaryFps : 1
  if (summary.shots.length === 0 && !options.allowEmpty) {
    throw new DecodeError('summary selects no shots (pass --allow-empty for a zero-length cut)')
  }
  const frames = []
  for (const [start, end] of summary.shots) {
    const from = Math.round(start * scale)
    const to = Math.min(video.frames.length, Math.round(end * scale))
    if (from < 0 || from > video.frames.length || end <= start) {
      throw new DecodeError(`shot [${start}, ${end}) falls outside the video`)
    }
    for (let i = from; i < to; i++) frames.push(video.frames[i])
  }
  return { ...video, frames }
}
