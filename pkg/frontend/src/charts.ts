import type { Bundle } from './bundle.js';
import type { ViewerState } from './state.js';

export interface BarSegment {
  nodeId: number;
  value: number;
  color: string;
}

export interface FrameBar {
  frame: number;
  total: number; // the pipeline's own per-frame value from frames.csv
  segments: BarSegment[]; // per active node, colored like the overlay
}

/**
 * Stacked bars, one per frame. Segment values come from the graph nodes
 * active in that frame so each slice can be related to a node color; the
 * bar total is the precomputed frames.csv value (never recomputed here).
 */
export function stackedBars(
  state: ViewerState,
  colorOf: (id: number) => string,
): FrameBar[] {
  const bundle: Bundle = state.bundle;
  return bundle.frames.rows.map((row) => {
    const nodes = bundle.nodesByFrame.get(row.frame) ?? [];
    const segments = nodes.map((n) => ({
      nodeId: n.id,
      value: state.nodeMetric(n),
      color: colorOf(n.id),
    }));
    const key = state.metric;
    return { frame: row.frame, total: row[key], segments };
  });
}
