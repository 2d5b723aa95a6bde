import { inDegree, outDegree, type Bundle } from './bundle.js';
import { framesCsvSlice } from './csv.js';
import type { ColorMode, GraphNode, Metric } from './types.js';

export interface Toggles {
  hidePostBreakthrough: boolean;
  showGraphUntilFrame: boolean; // only draw nodes with time <= selected
  hideTrivialNodes: boolean;
}

export class ViewerState {
  selectedFrame = 1;
  metric: Metric = 'area_px';
  colorMode: ColorMode = 'node-type';
  toggles: Toggles = {
    hidePostBreakthrough: false,
    showGraphUntilFrame: false,
    hideTrivialNodes: false,
  };

  constructor(readonly bundle: Bundle) {}

  get lastFrame(): number {
    return this.bundle.manifest.frames;
  }

  selectFrame(tau: number): void {
    if (!Number.isInteger(tau) || tau < 1 || tau > this.lastFrame) {
      throw new RangeError(`frame ${tau} outside 1..${this.lastFrame}`);
    }
    this.selectedFrame = tau;
  }

  /** Nodes active in the selected frame (marked in the frame view). */
  activeNodes(): GraphNode[] {
    return this.bundle.nodesByFrame.get(this.selectedFrame) ?? [];
  }

  /** Node ids highlighted for the current selection. */
  highlightedNodes(): Set<number> {
    return new Set(this.activeNodes().map((n) => n.id));
  }

  isTrivial(id: number): boolean {
    return inDegree(this.bundle, id) === 1 && outDegree(this.bundle, id) === 1;
  }

  /** Graph nodes shown in the overlay after applying every toggle. */
  visibleNodes(): GraphNode[] {
    const bt = this.bundle.manifest.breakthrough_frame;
    return this.bundle.graph.nodes.filter((n) => {
      if (this.toggles.hidePostBreakthrough && bt !== null && n.time > bt) {
        return false;
      }
      if (this.toggles.showGraphUntilFrame && n.time > this.selectedFrame) {
        return false;
      }
      if (this.toggles.hideTrivialNodes && this.isTrivial(n.id)) {
        return false;
      }
      return true;
    });
  }

  /** Edges whose endpoints are both visible. */
  visibleEdges() {
    const visible = new Set(this.visibleNodes().map((n) => n.id));
    return this.bundle.graph.edges.filter(
      (e) => visible.has(e.src) && visible.has(e.dst),
    );
  }

  /** Per-node contribution to the selected metric (for stacked segments). */
  nodeMetric(n: GraphNode): number {
    switch (this.metric) {
      case 'area_px':
        return n.area;
      case 'velocity_px_s':
        return n.velocity;
      case 'ff_interface_px':
        return n.ff_interface_len;
      case 'fs_interface_px':
        return n.fs_interface_len;
      case 'fingers':
        return 1;
    }
  }

  /**
   * CSV of the given inclusive frame range, byte-identical to the bundled
   * frames.csv when the full range is selected.
   */
  exportCsv(firstFrame = 1, lastFrame = this.lastFrame): string {
    if (firstFrame > lastFrame) {
      return framesCsvSlice(this.bundle.frames, 1, 0); // header only
    }
    return framesCsvSlice(this.bundle.frames, firstFrame, lastFrame);
  }
}
