import { stackedBars } from './charts.js';
import { NodeColors } from './colors.js';
import type { ViewerState } from './state.js';

/**
 * The subset of CanvasRenderingContext2D the renderer needs. Tests pass a
 * recording stub; the browser passes a real 2D context.
 */
export interface Draw2D {
  fillStyle: string | CanvasPattern | CanvasGradient;
  strokeStyle: string | CanvasPattern | CanvasGradient;
  lineWidth: number;
  fillRect(x: number, y: number, w: number, h: number): void;
  strokeRect(x: number, y: number, w: number, h: number): void;
  beginPath(): void;
  moveTo(x: number, y: number): void;
  lineTo(x: number, y: number): void;
  arc(x: number, y: number, r: number, a0: number, a1: number): void;
  stroke(): void;
  fill(): void;
  drawImage(img: unknown, x: number, y: number, w: number, h: number): void;
}

export interface RenderOptions {
  width: number;
  height: number;
  chartHeight: number; // bottom strip reserved for the stacked bar chart
  background?: unknown; // decoded frame (or time map) image, if available
  imageWidth: number;
  imageHeight: number;
}

const ACTIVE_MARK = '#ffd32a';
const CURSOR = '#ff3f34';

export interface RenderStats {
  nodesDrawn: number;
  edgesDrawn: number;
  barsDrawn: number;
  markedNodes: number[];
}

/** Composites background, graph overlay and the metric chart. */
export function renderFrameView(
  ctx: Draw2D,
  state: ViewerState,
  opts: RenderOptions,
  colors: NodeColors = new NodeColors(),
): RenderStats {
  const viewH = opts.height - opts.chartHeight;
  const sx = opts.width / opts.imageWidth;
  const sy = viewH / opts.imageHeight;

  ctx.fillStyle = '#1e272e';
  ctx.fillRect(0, 0, opts.width, opts.height);
  if (opts.background !== undefined) {
    ctx.drawImage(opts.background, 0, 0, opts.width, viewH);
  }

  const stats: RenderStats = {
    nodesDrawn: 0,
    edgesDrawn: 0,
    barsDrawn: 0,
    markedNodes: [],
  };

  // graph overlay at image coordinates (centroids), not layout coordinates:
  // the frame view relates fronts to the physical image
  const visible = state.visibleNodes();
  const positions = new Map(
    visible.map((n) => [n.id, [n.centroid[0] * sx, n.centroid[1] * sy]]),
  );
  ctx.strokeStyle = '#d2dae2';
  ctx.lineWidth = 1;
  for (const e of state.visibleEdges()) {
    const a = positions.get(e.src);
    const b = positions.get(e.dst);
    if (!a || !b) continue;
    ctx.beginPath();
    ctx.moveTo(a[0], a[1]);
    ctx.lineTo(b[0], b[1]);
    ctx.stroke();
    stats.edgesDrawn++;
  }
  const highlighted = state.highlightedNodes();
  for (const n of visible) {
    const [x, y] = positions.get(n.id)!;
    ctx.fillStyle = colors.color(state.bundle, n.id, state.colorMode);
    ctx.beginPath();
    ctx.arc(x, y, 3, 0, Math.PI * 2);
    ctx.fill();
    stats.nodesDrawn++;
    if (highlighted.has(n.id)) {
      ctx.strokeStyle = ACTIVE_MARK;
      ctx.lineWidth = 2;
      ctx.beginPath();
      ctx.arc(x, y, 6, 0, Math.PI * 2);
      ctx.stroke();
      stats.markedNodes.push(n.id);
    }
  }

  stats.barsDrawn = renderChart(ctx, state, opts, colors, viewH);
  return stats;
}

function renderChart(
  ctx: Draw2D,
  state: ViewerState,
  opts: RenderOptions,
  colors: NodeColors,
  top: number,
): number {
  const bars = stackedBars(state, (id) =>
    colors.color(state.bundle, id, state.colorMode),
  );
  const maxTotal = Math.max(1e-9, ...bars.map((b) => b.total));
  const barW = opts.width / Math.max(bars.length, 1);
  let drawn = 0;
  for (let i = 0; i < bars.length; i++) {
    const bar = bars[i];
    const x = i * barW;
    const fullH = (bar.total / maxTotal) * (opts.chartHeight - 4);
    const segSum = bar.segments.reduce((s, seg) => s + seg.value, 0);
    let y = opts.height;
    for (const seg of bar.segments) {
      // segments split the bar height proportionally; the height itself
      // stays the precomputed per-frame total
      const h = segSum > 0 ? (seg.value / segSum) * fullH : 0;
      ctx.fillStyle = seg.color;
      ctx.fillRect(x, y - h, Math.max(barW - 1, 1), h);
      y -= h;
    }
    if (bar.segments.length === 0 && bar.total > 0) {
      ctx.fillStyle = '#808e9b';
      ctx.fillRect(x, opts.height - fullH, Math.max(barW - 1, 1), fullH);
    }
    drawn++;
    if (bar.frame === state.selectedFrame) {
      ctx.strokeStyle = CURSOR;
      ctx.lineWidth = 1;
      ctx.strokeRect(x, top, Math.max(barW - 1, 1), opts.chartHeight);
    }
  }
  return drawn;
}
