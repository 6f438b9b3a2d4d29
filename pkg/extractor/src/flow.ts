/**
 * Grid-based dense optical flow features.
 *
 * Consecutive grayscale frames are compared cell by cell on an N x N grid:
 * each cell solves a regularized Lucas-Kanade 2x2 system for one (u, v)
 * motion vector. The per-frame feature vector is the per-cell mean flow
 * magnitude (N*N values) followed by an 8-bin direction histogram weighted
 * by magnitude. The first frame has no predecessor and gets zeros; the
 * whole matrix is min-max normalized to [0, 1] at the end (all-zeros when
 * the clip is static, i.e. min == max).
 */

const DIRECTION_BINS = 8

export function flowFeatureDim(grid: number): number {
  return grid * grid + DIRECTION_BINS
}

export function flowFeatures(prev: Float32Array, cur: Float32Array,
                             width: number, height: number, grid: number): Float32Array {
  const out = new Float32Array(flowFeatureDim(grid))
  for (let gy = 0; gy < grid; gy++) {
    const top = Math.max(1, Math.floor((gy * height) / grid))
    const bottom = Math.min(height - 1, Math.floor(((gy + 1) * height) / grid))
    for (let gx = 0; gx < grid; gx++) {
      const left = Math.max(1, Math.floor((gx * width) / grid))
      const right = Math.min(width - 1, Math.floor(((gx + 1) * width) / grid))
      let sxx = 0
      let sxy = 0
      let syy = 0
      let sxt = 0
      let syt = 0
      for (let row = top; row < bottom; row++) {
        for (let col = left; col < right; col++) {
          const i = row * width + col
          const ix = (cur[i + 1] - cur[i - 1]) / 2
          const iy = (cur[i + width] - cur[i - width]) / 2
          const it = cur[i] - prev[i]
          sxx += ix * ix
          sxy += ix * iy
          syy += iy * iy
          sxt += ix * it
          syt += iy * it
        }
      }
      // regularized 2x2 solve: (A + lambda I) [u v]^T = -b
      const lambda = 1e-3 * Math.max(1, (bottom - top) * (right - left))
      const a = sxx + lambda
      const d = syy + lambda
      const det = a * d - sxy * sxy
      const u = (-sxt * d + syt * sxy) / det
      const v = (sxt * sxy - syt * a) / det
      const mag = Math.hypot(u, v)
      out[gy * grid + gx] = mag
      if (mag > 1e-12) {
        let angle = Math.atan2(v, u) // (-pi, pi]
        if (angle < 0) angle += 2 * Math.PI
        const bin = Math.min(DIRECTION_BINS - 1, Math.floor((angle / (2 * Math.PI)) * DIRECTION_BINS))
        out[grid * grid + bin] += mag
      }
    }
  }
  return out
}

/** global min-max normalization to [0, 1]; a constant matrix maps to zeros */
export function minMaxNormalize(rows: Float32Array[]): Float32Array[] {
  let lo = Infinity
  let hi = -Infinity
  for (const row of rows) {
    for (const value of row) {
      if (value < lo) lo = value
      if (value > hi) hi = value
    }
  }
  if (!(hi > lo)) return rows.map((row) => new Float32Array(row.length))
  const span = hi - lo
  return rows.map((row) => {
    const out = new Float32Array(row.length)
    for (let i = 0; i < row.length; i++) out[i] = (row[i] - lo) / span
    return out
  })
}
