import { inDegree, outDegree, type Bundle } from './bundle.js';
import type { ColorMode, NodeType } from './types.js';

export function nodeType(bundle: Bundle, id: number): NodeType {
  const din = inDegree(bundle, id);
  const dout = outDegree(bundle, id);
  if (din === 0) return 'source';
  if (dout === 0) return 'sink';
  if (din === 1 && dout === 1) return 'trivial';
  if (din > 1) return 'merge';
  return 'split';
}

export const TYPE_PALETTE: Record<NodeType, string> = {
  source: '#2e86de',
  sink: '#c0392b',
  merge: '#8e44ad',
  split: '#e67e22',
  trivial: '#95a5a6',
};

// mulberry32: tiny seeded PRNG so random colors are stable per session
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a |= 0;
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export class NodeColors {
  private random = new Map<number, string>();

  constructor(private readonly seed: number = 1) {}

  color(bundle: Bundle, id: number, mode: ColorMode): string {
    if (mode === 'node-type') return TYPE_PALETTE[nodeType(bundle, id)];
    let c = this.random.get(id);
    if (!c) {
      const rng = mulberry32(this.seed * 0x9e3779b9 + id);
      const h = Math.floor(rng() * 360);
      c = `hsl(${h}, ${55 + Math.floor(rng() * 25)}%, ${40 + Math.floor(rng() * 20)}%)`;
      this.random.set(id, c);
    }
    return c;
  }
}
