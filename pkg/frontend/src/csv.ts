import type { FrameRow } from './types.js';

export const FRAMES_HEADER =
  'frame,time_s,area_px,velocity_px_s,ff_interface_px,fs_interface_px,fingers';

export class CsvError extends Error {}

/**
 * frames.csv, kept alongside its raw source lines.
 *
 * Export must be byte-identical to what the pipeline wrote, so slicing the
 * original text is the only safe implementation: re-serializing floats
 * would have to reproduce Python's repr() exactly.
 */
export interface FramesTable {
  rows: FrameRow[];
  rawLines: string[]; // data lines only, no header, original bytes
}

export function parseFramesCsv(text: string): FramesTable {
  const lines = text.split('\n');
  if (lines[lines.length - 1] === '') lines.pop(); // trailing newline
  if (lines[0] !== FRAMES_HEADER) {
    throw new CsvError(`unexpected frames.csv header: ${lines[0]}`);
  }
  const rawLines = lines.slice(1);
  const rows = rawLines.map((line, i) => {
    const parts = line.split(',');
    if (parts.length !== 7) {
      throw new CsvError(`frames.csv row ${i + 1}: expected 7 fields`);
    }
    return {
      frame: Number(parts[0]),
      time_s: Number(parts[1]),
      area_px: Number(parts[2]),
      velocity_px_s: Number(parts[3]),
      ff_interface_px: Number(parts[4]),
      fs_interface_px: Number(parts[5]),
      fingers: Number(parts[6]),
    };
  });
  return { rows, rawLines };
}

/** CSV text for frames firstFrame..lastFrame inclusive (1-based). */
export function framesCsvSlice(
  table: FramesTable,
  firstFrame: number,
  lastFrame: number,
): string {
  const picked: string[] = [];
  for (let i = 0; i < table.rows.length; i++) {
    const f = table.rows[i].frame;
    if (f >= firstFrame && f <= lastFrame) picked.push(table.rawLines[i]);
  }
  return [FRAMES_HEADER, ...picked].map((l) => l + '\n').join('');
}
