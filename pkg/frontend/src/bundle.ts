import { parseFramesCsv, type FramesTable } from './csv.js';
import type {
  BundleFetcher,
  GraphDoc,
  GraphEdge,
  GraphNode,
  Manifest,
} from './types.js';

export class BundleLoadError extends Error {}

export interface Bundle {
  manifest: Manifest;
  graph: GraphDoc;
  frames: FramesTable;
  framesCsvText: string;
  // Precomputed indexes so frame scrubbing never scans the whole graph.
  nodesById: Map<number, GraphNode>;
  nodesByFrame: Map<number, GraphNode[]>;
  inEdges: Map<number, GraphEdge[]>;
  outEdges: Map<number, GraphEdge[]>;
  frameImages: Map<number, Uint8Array>; // may be empty (timemap fallback)
  timemapPng: Uint8Array | null;
}

async function json<T>(fetcher: BundleFetcher, path: string): Promise<T> {
  let text: string;
  try {
    text = await fetcher.text(path);
  } catch (e) {
    throw new BundleLoadError(`cannot read ${path}: ${String(e)}`);
  }
  try {
    return JSON.parse(text) as T;
  } catch {
    throw new BundleLoadError(`${path} is not valid JSON`);
  }
}

export async function loadBundle(fetcher: BundleFetcher): Promise<Bundle> {
  const manifest = await json<Manifest>(fetcher, 'manifest.json');
  const graph = await json<GraphDoc>(fetcher, 'graph.json');
  const framesCsvText = await fetcher.text('frames.csv');
  const frames = parseFramesCsv(framesCsvText);

  const nodesById = new Map<number, GraphNode>();
  const nodesByFrame = new Map<number, GraphNode[]>();
  for (const n of graph.nodes) {
    nodesById.set(n.id, n);
    const group = nodesByFrame.get(n.time);
    if (group) group.push(n);
    else nodesByFrame.set(n.time, [n]);
  }
  const inEdges = new Map<number, GraphEdge[]>();
  const outEdges = new Map<number, GraphEdge[]>();
  for (const e of graph.edges) {
    if (!nodesById.has(e.src) || !nodesById.has(e.dst)) {
      throw new BundleLoadError(`edge ${e.src}->${e.dst} references unknown node`);
    }
    (inEdges.get(e.dst) ?? inEdges.set(e.dst, []).get(e.dst)!).push(e);
    (outEdges.get(e.src) ?? outEdges.set(e.src, []).get(e.src)!).push(e);
  }

  const frameImages = new Map<number, Uint8Array>();
  for (const name of Object.keys(manifest.files)) {
    const m = /^frames\/frame_(\d+)\.png$/.exec(name);
    if (!m) continue;
    const data = await fetcher.binary(name);
    if (data) frameImages.set(Number(m[1]), data);
  }
  const timemapPng = await fetcher.binary('timemap.png');
  return {
    manifest,
    graph,
    frames,
    framesCsvText,
    nodesById,
    nodesByFrame,
    inEdges,
    outEdges,
    frameImages,
    timemapPng,
  };
}

export function inDegree(bundle: Bundle, id: number): number {
  return bundle.inEdges.get(id)?.length ?? 0;
}

export function outDegree(bundle: Bundle, id: number): number {
  return bundle.outEdges.get(id)?.length ?? 0;
}
