/**
 * Per-frame appearance embedding.
 *
 * The backbone id selects a fixed-weight patch-projection network
 * ("patchproj{dim}-s{seed}"): the crop is divided into an 8x8 patch grid,
 * per-patch channel means form a 192-dim descriptor, and a seeded random
 * projection maps it to the requested dimension. Weights are derived
 * deterministically from the seed, so extraction is reproducible without
 * downloading pretrained checkpoints; swap in a real network by
 * implementing the same one-frame-in, one-vector-out interface.
 */

import { DecodeError } from './errors'
import { RgbImage } from './image'

export interface Backbone {
  id: string
  dim: number
  embed(frame: RgbImage): Float32Array
}

const PATCH_GRID = 8

/** deterministic 32-bit PRNG (mulberry32) for weight generation */
function mulberry32(seed: number): () => number {
  let state = seed >>> 0
  return () => {
    state = (state + 0x6d2b79f5) >>> 0
    let t = state
    t = Math.imul(t ^ (t >>> 15), t | 1)
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61)
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296
  }
}

export function makeBackbone(id: string = 'patchproj64-s1'): Backbone {
  const match = /^patchproj(\d+)-s(\d+)$/.exec(id)
  if (!match) throw new DecodeError(`unknown backbone id ${JSON.stringify(id)}`)
  const dim = parseInt(match[1], 10)
  const seed = parseInt(match[2], 10)
  const inDim = PATCH_GRID * PATCH_GRID * 3
  const rand = mulberry32(seed)
  const scale = 1 / Math.sqrt(inDim)
  const weights = new Float32Array(inDim * dim)
  for (let i = 0; i < weights.length; i++) weights[i] = (2 * rand() - 1) * scale

  return {
    id,
    dim,
    embed(frame: RgbImage): Float32Array {
      const descriptor = patchMeans(frame)
      const out = new Float32Array(dim)
      for (let j = 0; j < dim; j++) {
        let acc = 0
        for (let i = 0; i < inDim; i++) acc += descriptor[i] * weights[i * dim + j]
        out[j] = acc
      }
      return out
    },
  }
}

function patchMeans(frame: RgbImage): Float32Array {
  const out = new Float32Array(PATCH_GRID * PATCH_GRID * 3)
  for (let py = 0; py < PATCH_GRID; py++) {
    const top = Math.floor((py * frame.height) / PATCH_GRID)
    const bottom = Math.floor(((py + 1) * frame.height) / PATCH_GRID)
    for (let px = 0; px < PATCH_GRID; px++) {
      const left = Math.floor((px * frame.width) / PATCH_GRID)
      const right = Math.floor(((px + 1) * frame.width) / PATCH_GRID)
      let r = 0
      let g = 0
      let b = 0
      const count = Math.max(1, (bottom - top) * (right - left))
      for (let row = top; row < bottom; row++) {
        for (let col = left; col < right; col++) {
          const base = 3 * (row * frame.width + col)
          r += frame.data[base]
          g += frame.data[base + 1]
          b += frame.data[base + 2]
        }
      }
      const base = 3 * (py * PATCH_GRID + px)
      out[base] = r / count / 255
      out[base + 1] = g / count / 255
      out[base + 2] = b / count / 255
    }
  }
  return out
}
