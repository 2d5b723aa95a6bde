import { readFile } from 'node:fs/promises';
import { join } from 'node:path';
import { loadBundle, type Bundle } from '../src/bundle.js';
import type { Draw2D } from '../src/render.js';
import type { BundleFetcher } from '../src/types.js';

const FIXTURES = join(__dirname, 'fixtures');

export function fsFetcher(bundleName: string): BundleFetcher {
  const root = join(FIXTURES, bundleName);
  return {
    async text(path: string): Promise<string> {
      return readFile(join(root, path), 'utf8');
    },
    async binary(path: string): Promise<Uint8Array | null> {
      try {
        return new Uint8Array(await readFile(join(root, path)));
      } catch {
        return null;
      }
    },
  };
}

export function loadFixtureBundle(name: string): Promise<Bundle> {
  return loadBundle(fsFetcher(name));
}

export async function fixtureFileText(
  bundleName: string,
  path: string,
): Promise<string> {
  return readFile(join(FIXTURES, bundleName, path), 'utf8');
}

export interface RecordingCtx extends Draw2D {
  calls: string[];
}

/** Draw2D stub that records call names; no real canvas needed. */
export function recordingCtx(): RecordingCtx {
  const calls: string[] = [];
  const record =
    (name: string) =>
    (..._args: unknown[]) => {
      calls.push(name);
    };
  return {
    calls,
    fillStyle: '',
    strokeStyle: '',
    lineWidth: 1,
    fillRect: record('fillRect'),
    strokeRect: record('strokeRect'),
    beginPath: record('beginPath'),
    moveTo: record('moveTo'),
    lineTo: record('lineTo'),
    arc: record('arc'),
    stroke: record('stroke'),
    fill: record('fill'),
    drawImage: record('drawImage'),
  };
}
