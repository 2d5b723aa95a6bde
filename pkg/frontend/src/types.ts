// Bundle schema as written by the pipeline's export step. The viewer never
// recomputes any of these numbers; it only displays them.

export interface GraphNode {
  id: number;
  time: number;
  area: number;
  centroid: [number, number]; // (x, y) pixels in the source image
  ff_interface_len: number;
  fs_interface_len: number;
  bbox: [number, number, number, number];
  velocity: number;
  out_degree_category: number;
  chain?: number[];
  combined_area?: number;
  layout?: [number, number];
  pinned?: boolean;
}

export interface GraphEdge {
  src: number;
  dst: number;
  d_forward: number | null;
  d_backward: number | null;
  delta_t: number;
  velocity: number;
  chain?: number[];
}

export interface GraphDoc {
  frame_period: number;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface Manifest {
  dataset: string;
  frames: number;
  frame_period: number;
  breakthrough_frame: number | null;
  breakthrough_node: number | null;
  inlet: string;
  outlet: string;
  layout_present: boolean;
  files: Record<string, string>;
}

export interface FrameRow {
  frame: number;
  time_s: number;
  area_px: number;
  velocity_px_s: number;
  ff_interface_px: number;
  fs_interface_px: number;
  fingers: number;
}

export type Metric =
  | 'area_px'
  | 'velocity_px_s'
  | 'ff_interface_px'
  | 'fs_interface_px'
  | 'fingers';

export type ColorMode = 'node-type' | 'random';

export type NodeType = 'source' | 'sink' | 'merge' | 'split' | 'trivial';

// Fetches a bundle-relative path. Browser: fetch(); tests: fs.readFile.
export interface BundleFetcher {
  text(path: string): Promise<string>;
  // Returns null when the file is absent (e.g. bundles without frames/).
  binary(path: string): Promise<Uint8Array | null>;
}
