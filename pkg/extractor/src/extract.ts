/**
 * Video -> FSEQ1 feature files: decode, aspect-preserving resize, center
 * crop, per-frame appearance embedding (rgb stream) and grid optical-flow
 * features (flow stream, min-max normalized to [0, 1]).
 */

import * as fs from 'fs'
import * as path from 'path'

import { makeBackbone } from './backbone'
import { IoError } from './errors'
import { centerCrop, resizeBilinear, resizedDims, toGray, yuvToRgb } from './image'
import { flowFeatureDim, flowFeatures, minMaxNormalize } from './flow'
import { encodeFseq } from './fseq'
import { fps as videoFps, parseY4m } from './y4m'

export interface ExtractConfig {
  resizeShortSide: number
  cropWidth: number
  cropHeight: number
  flowGrid: number
  backboneId: string
  /** subsample to this rate before extraction; 0 keeps the source rate */
  outputFps: number
}

export const DEFAULT_CONFIG: ExtractConfig = {
  resizeShortSide: 128,
  cropWidth: 112,
  cropHeight: 112,
  flowGrid: 15,
  backboneId: 'patchproj64-s1',
  outputFps: 0,
}

export interface ExtractResult {
  videoId: string
  rgbPath: string
  flowPath: string
  frameCount: number
  fps: number
}

/** frame indices kept when subsampling, round(k * src / target) while < t */
export function subsampleIndices(t: number, srcFps: number, targetFps: number): number[] {
  if (targetFps <= 0 || targetFps >= srcFps) return Array.from({ length: t }, (_, i) => i)
  const ratio = srcFps / targetFps
  const keep: number[] = []
  for (let k = 0; ; k++) {
    const idx = Math.round(k * ratio)
    if (idx >= t) break
    if (keep.length === 0 || keep[keep.length - 1] !== idx) keep.push(idx)
  }
  return keep
}

export function extract(videoPath: string, outDir: string, config: ExtractConfig = DEFAULT_CONFIG): ExtractResult {
  let data: Buffer
  try {
    data = fs.readFileSync(videoPath)
  } catch (err) {
    throw new IoError(`cannot read ${videoPath}: ${err}`)
  }
  const video = parseY4m(data)
  const srcFps = videoFps(video)
  const keep = subsampleIndices(video.frames.length, srcFps, config.outputFps)
  const outFps = config.outputFps > 0 && config.outputFps < srcFps ? config.outputFps : srcFps

  const dims = resizedDims(video.width, video.height, config.resizeShortSide)
  const backbone = makeBackbone(config.backboneId)

  const rgbRows: Float32Array[] = []
  const flowRows: Float32Array[] = []
  let prevGray: Float32Array | null = null
  for (const idx of keep) {
    const rgb = yuvToRgb(video.frames[idx], video.width, video.height, video.colorspace)
    const resized = resizeBilinear(rgb, dims.width, dims.height)
    const crop = centerCrop(resized, config.cropWidth, config.cropHeight)
    rgbRows.push(backbone.embed(crop))
    const gray = toGray(resized)
    flowRows.push(
      prevGray === null
        ? new Float32Array(flowFeatureDim(config.flowGrid))
        : flowFeatures(prevGray, gray, dims.width, dims.height, config.flowGrid),
    )
    prevGray = gray
  }
  const flowNormed = minMaxNormalize(flowRows)

  const videoId = path.basename(videoPath).replace(/\.[^.]+$/, '')
  fs.mkdirSync(path.join(outDir, 'rgb'), { recursive: true })
  fs.mkdirSync(path.join(outDir, 'flow'), { recursive: true })
  const rgbPath = path.join(outDir, 'rgb', `${videoId}.fseq`)
  const flowPath = path.join(outDir, 'flow', `${videoId}.fseq`)
  try {
    fs.writeFileSync(rgbPath, encodeFseq(rgbRows, backbone.dim, outFps, 'rgb'))
    fs.writeFileSync(flowPath, encodeFseq(flowNormed, flowFeatureDim(config.flowGrid), outFps, 'flow'))
  } catch (err) {
    if (err instanceof Error && err.name === 'DecodeError') throw err
    throw new IoError(`cannot write features under ${outDir}: ${err}`)
  }
  return { videoId, rgbPath, flowPath, frameCount: keep.length, fps: outFps }
}
