/**
 * Minimal YUV4MPEG2 (.y4m) reader/writer.
 *
 * Supports progressive 4:2:0 (any chroma-siting flavour) and 4:4:4 clips;
 * everything runs on raw frames so no external decoder is needed.
 */

import { DecodeError } from './errors'

export interface Y4mVideo {
  width: number
  height: number
  fpsNum: number
  fpsDen: number
  colorspace: string
  /** one Y/U/V plane triple per frame */
  frames: Y4mFrame[]
}

export interface Y4mFrame {
  y: Uint8Array
  u: Uint8Array
  v: Uint8Array
}

const MAGIC = 'YUV4MPEG2'

function chromaSize(colorspace: string, width: number, height: number): number {
  if (colorspace.startsWith('C420') || colorspace === '') {
    if (width % 2 !== 0 || height % 2 !== 0) {
      throw new DecodeError(`4:2:0 clip needs even dimensions, got ${width}x${height}`)
    }
    return (width / 2) * (height / 2)
  }
  if (colorspace.startsWith('C444')) return width * height
  throw new DecodeError(`unsupported colorspace ${colorspace}`)
}

export function parseY4m(data: Buffer): Y4mVideo {
  const headerEnd = data.indexOf(0x0a)
  if (headerEnd < 0) throw new DecodeError('missing stream header terminator')
  const header = data.subarray(0, headerEnd).toString('ascii')
  const tokens = header.split(' ')
  if (tokens[0] !== MAGIC) throw new DecodeError(`bad magic ${JSON.stringify(tokens[0])}`)

  let width = 0
  let height = 0
  let fpsNum = 0
  let fpsDen = 1
  let colorspace = 'C420'
  for (const token of tokens.slice(1)) {
    if (token.startsWith('W')) width = parseInt(token.slice(1), 10)
    else if (token.startsWith('H')) height = parseInt(token.slice(1), 10)
    else if (token.startsWith('F')) {
      const [num, den] = token.slice(1).split(':')
      fpsNum = parseInt(num, 10)
      fpsDen = parseInt(den ?? '1', 10)
    } else if (token.startsWith('C')) colorspace = token
  }
  if (!(width > 0 && height > 0)) throw new DecodeError(`bad dimensions ${width}x${height}`)
  if (!(fpsNum > 0 && fpsDen > 0)) throw new DecodeError('missing or invalid frame rate')

  const ySize = width * height
  const cSize = chromaSize(colorspace, width, height)
  const frames: Y4mFrame[] = []
  let offset = headerEnd + 1
  while (offset < data.length) {
    const lineEnd = data.indexOf(0x0a, offset)
    if (lineEnd < 0) throw new DecodeError('truncated frame header')
    const frameHeader = data.subarray(offset, lineEnd).toString('ascii')
    if (!frameHeader.startsWith('FRAME')) {
      throw new DecodeError(`expected FRAME marker, found ${JSON.stringify(frameHeader.slice(0, 16))}`)
    }
    offset = lineEnd + 1
    if (offset + ySize + 2 * cSize > data.length) throw new DecodeError('truncated frame payload')
    frames.push({
      y: new Uint8Array(data.subarray(offset, offset + ySize)),
      u: new Uint8Array(data.subarray(offset + ySize, offset + ySize + cSize)),
      v: new Uint8Array(data.subarray(offset + ySize + cSize, offset + ySize + 2 * cSize)),
    })
    offset += ySize + 2 * cSize
  }
  return { width, height, fpsNum, fpsDen, colorspace, frames }
}

export function writeY4m(video: Y4mVideo): Buffer {
  const header = `${MAGIC} W${video.width} H${video.height} F${video.fpsNum}:${video.fpsDen} Ip A1:1 ${video.colorspace}\n`
  const parts: Buffer[] = [Buffer.from(header, 'ascii')]
  for (const frame of video.frames) {
    parts.push(Buffer.from('FRAME\n', 'ascii'))
    parts.push(Buffer.from(frame.y), Buffer.from(frame.u), Buffer.from(frame.v))
  }
  return Buffer.concat(parts)
}

export function fps(video: Y4mVideo): number {
  return video.fpsNum / video.fpsDen
}
