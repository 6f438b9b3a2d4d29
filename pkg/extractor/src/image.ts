/**
 * Planar image helpers: YUV -> RGB conversion, bilinear resize with the
 * aspect ratio preserved, center cropping, grayscale.
 */

import { DecodeError } from './errors'
import { Y4mFrame } from './y4m'

/** interleaved RGB, float values in [0, 255] */
export interface RgbImage {
  width: number
  height: number
  data: Float32Array // length 3 * width * height
}

/** BT.601 limited-range YUV to RGB */
export function yuvToRgb(frame: Y4mFrame, width: number, height: number, colorspace: string): RgbImage {
  const data = new Float32Array(3 * width * height)
  const is420 = colorspace.startsWith('C420') || colorspace === ''
  const cw = is420 ? width / 2 : width
  for (let row = 0; row < height; row++) {
    for (let col = 0; col < width; col++) {
      const yv = frame.y[row * width + col]
      const ci = is420 ? (row >> 1) * cw + (col >> 1) : row * width + col
      const c = 1.164 * (yv - 16)
      const d = frame.u[ci] - 128
      const e = frame.v[ci] - 128
      const base = 3 * (row * width + col)
      data[base] = clamp255(c + 1.596 * e)
      data[base + 1] = clamp255(c - 0.392 * d - 0.813 * e)
      data[base + 2] = clamp255(c + 2.017 * d)
    }
  }
  return { width, height, data }
}

function clamp255(v: number): number {
  return v < 0 ? 0 : v > 255 ? 255 : v
}

/**
 * Dimensions after resizing the short side to `shortSide` with the aspect
 * ratio preserved; the long side is truncated to a whole pixel
 * (640x360 -> 227x128).
 */
export function resizedDims(width: number, height: number, shortSide: number): { width: number; height: number } {
  if (shortSide < 1) throw new DecodeError(`bad short side ${shortSide}`)
  if (height <= width) {
    return { width: Math.max(1, Math.floor((width * shortSide) / height)), height: shortSide }
  }
  return { width: shortSide, height: Math.max(1, Math.floor((height * shortSide) / width)) }
}

export function resizeBilinear(img: RgbImage, outWidth: number, outHeight: number): RgbImage {
  const out = new Float32Array(3 * outWidth * outHeight)
  const xScale = img.width / outWidth
  const yScale = img.height / outHeight
  for (let row = 0; row < outHeight; row++) {
    // sample at pixel centers
    const sy = Math.min(Math.max((row + 0.5) * yScale - 0.5, 0), img.height - 1)
    const y0 = Math.floor(sy)
    const y1 = Math.min(y0 + 1, img.height - 1)
    const fy = sy - y0
    for (let col = 0; col < outWidth; col++) {
      const sx = Math.min(Math.max((col + 0.5) * xScale - 0.5, 0), img.width - 1)
      const x0 = Math.floor(sx)
      const x1 = Math.min(x0 + 1, img.width - 1)
      const fx = sx - x0
      for (let ch = 0; ch < 3; ch++) {
        const p00 = img.data[3 * (y0 * img.width + x0) + ch]
        const p01 = img.data[3 * (y0 * img.width + x1) + ch]
        const p10 = img.data[3 * (y1 * img.width + x0) + ch]
        const p11 = img.data[3 * (y1 * img.width + x1) + ch]
        out[3 * (row * outWidth + col) + ch] =
          (1 - fy) * ((1 - fx) * p00 + fx * p01) + fy * ((1 - fx) * p10 + fx * p11)
      }
    }
  }
  return { width: outWidth, height: outHeight, data: out }
}

export function centerCrop(img: RgbImage, cropWidth: number, cropHeight: number): RgbImage {
  if (cropWidth > img.width || cropHeight > img.height) {
    throw new DecodeError(`crop ${cropWidth}x${cropHeight} exceeds image ${img.width}x${img.height}`)
  }
  const left = Math.floor((img.width - cropWidth) / 2)
  const top = Math.floor((img.height - cropHeight) / 2)
  const out = new Float32Array(3 * cropWidth * cropHeight)
  for (let row = 0; row < cropHeight; row++) {
    for (let col = 0; col < cropWidth; col++) {
      const src = 3 * ((top + row) * img.width + (left + col))
      const dst = 3 * (row * cropWidth + col)
      out[dst] = img.data[src]
      out[dst + 1] = img.data[src + 1]
      out[dst + 2] = img.data[src + 2]
    }
  }
  return { width: cropWidth, height: cropHeight, data: out }
}

export function toGray(img: RgbImage): Float32Array {
  const out = new Float32Array(img.width * img.height)
  for (let i = 0; i < out.length; i++) {
    out[i] = 0.299 * img.data[3 * i] + 0.587 * img.data[3 * i + 1] + 0.114 * img.data[3 * i + 2]
  }
  return out
}
