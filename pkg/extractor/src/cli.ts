#!/usr/bin/env node
/**
 * vsumpipe-extract <command>
 *
 *   extract --input clip.y4m --out-dir feats [--resize-short-side 128]
 *           [--crop 112x112] [--flow-grid 15] [--backbone patchproj64-s1]
 *           [--fps 0]
 *   cut     --input clip.y4m --summary summary.json --out cut.y4m
 *           [--summary-fps 0] [--allow-empty]
 *
 * Exit codes: 0 ok, 1 invalid input, 2 I/O error, 64 usage.
 */

import * as fs from 'fs'

import { cutSummary, readSummary } from './cut'
import { DecodeError, IoError } from './errors'
import { DEFAULT_CONFIG, extract } from './extract'
import { writeY4m } from './y4m'

const EXIT_VALIDATION = 1
const EXIT_IO = 2
const EXIT_USAGE = 64

function parseFlags(argv: string[]): Map<string, string> {
  const flags = new Map<string, string>()
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i]
    if (!arg.startsWith('--')) throw new UsageError(`unexpected argument ${arg}`)
    if (arg === '--allow-empty') {
      flags.set('allow-empty', 'true')
      continue
    }
    const value = argv[i + 1]
    if (value === undefined) throw new UsageError(`flag ${arg} needs a value`)
    flags.set(arg.slice(2), value)
    i++
  }
  return flags
}

class UsageError extends Error {}

function need(flags: Map<string, string>, name: string): string {
  const value = flags.get(name)
  if (value === undefined) throw new UsageError(`missing required flag --${name}`)
  return value
}

function runExtract(flags: Map<string, string>): void {
  const crop = (flags.get('crop') ?? '112x112').split('x').map((v) => parseInt(v, 10))
  if (crop.length !== 2 || crop.some((v) => !(v > 0))) throw new UsageError('--crop expects WIDTHxHEIGHT')
  const result = extract(need(flags, 'input'), need(flags, 'out-dir'), {
    resizeShortSide: parseInt(flags.get('resize-short-side') ?? String(DEFAULT_CONFIG.resizeShortSide), 10),
    cropWidth: crop[0],
    cropHeight: crop[1],
    flowGrid: parseInt(flags.get('flow-grid') ?? String(DEFAULT_CONFIG.flowGrid), 10),
    backboneId: flags.get('backbone') ?? DEFAULT_CONFIG.backboneId,
    outputFps: parseFloat(flags.get('fps') ?? '0'),
  })
  console.log(`${result.videoId}: ${result.frameCount} frames at ${result.fps} fps`)
  console.log(`  rgb  -> ${result.rgbPath}`)
  console.log(`  flow -> ${result.flowPath}`)
}

function runCut(flags: Map<string, string>): void {
  const summary = readSummary(need(flags, 'summary'))
  const video = cutSummary(need(flags, 'input'), summary, {
    summaryFps: parseFloat(flags.get('summary-fps') ?? '0'),
    allowEmpty: flags.has('allow-empty'),
  })
  const out = need(flags, 'out')
  fs.writeFileSync(out, writeY4m(video))
  console.log(`${video.frames.length} frames -> ${out}`)
}

export function main(argv: string[]): number {
  try {
    const [command, ...rest] = argv
    if (command === 'extract') runExtract(parseFlags(rest))
    else if (command === 'cut') runCut(parseFlags(rest))
    else throw new UsageError(`unknown command ${JSON.stringify(command ?? '')} (expected extract|cut)`)
    return 0
  } catch (err) {
    if (err instanceof UsageError) {
      console.error(`usage error: ${err.message}`)
      return EXIT_USAGE
    }
    if (err instanceof IoError) {
      console.error(`i/o error: ${err.message}`)
      return EXIT_IO
    }
    if (err instanceof DecodeError) {
      console.error(`invalid input: ${err.message}`)
      return EXIT_VALIDATION
    }
    throw err
  }
}

if (require.main === module) {
  process.exit(main(process.argv.slice(2)))
}
