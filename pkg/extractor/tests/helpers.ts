/** Synthetic Y4M clips for the tests: a bright square drifting across a
 * gray background (grayscale chroma, 4:2:0). */

import { writeY4m, Y4mFrame, Y4mVideo } from '../src/y4m'

export function movingSquareClip(width = 160, height = 120, frames = 90, fpsNum = 30): Y4mVideo {
  const out: Y4mFrame[] = []
  const square = Math.floor(Math.min(width, height) / 4)
  for (let t = 0; t < frames; t++) {
    const y = new Uint8Array(width * height).fill(60)
    const left = Math.floor(((width - square) * t) / Math.max(1, frames - 1))
    const top = Math.floor(height / 3)
    for (let row = top; row < top + square; row++) {
      for (let col = left; col < left + square; col++) {
        y[row * width + col] = 200
      }
    }
    out.push({
      y,
      u: new Uint8Array((width / 2) * (height / 2)).fill(128),
      v: new Uint8Array((width / 2) * (height / 2)).fill(128),
    })
  }
  return { width, height, fpsNum, fpsDen: 1, colorspace: 'C420jpeg', frames: out }
}

export function clipBuffer(video: Y4mVideo): Buffer {
  return writeY4m(video)
}
