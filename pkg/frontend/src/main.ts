// Browser entry point: wires the DOM controls to the viewer state and
// renders into a single canvas. Everything testable lives in the other
// modules; this file is only glue.

import { loadBundle, type Bundle } from './bundle.js';
import { NodeColors } from './colors.js';
import { renderFrameView } from './render.js';
import { ViewerState } from './state.js';
import type { BundleFetcher, Metric } from './types.js';

function fetchFetcher(base: string): BundleFetcher {
  return {
    async text(path: string): Promise<string> {
      const res = await fetch(`${base}/${path}`);
      if (!res.ok) throw new Error(`${path}: HTTP ${res.status}`);
      return res.text();
    },
    async binary(path: string): Promise<Uint8Array | null> {
      const res = await fetch(`${base}/${path}`);
      if (!res.ok) return null;
      return new Uint8Array(await res.arrayBuffer());
    },
  };
}

function decodePng(data: Uint8Array): Promise<ImageBitmap> {
  return createImageBitmap(new Blob([data as BlobPart], { type: 'image/png' }));
}

async function start(): Promise<void> {
  const params = new URLSearchParams(location.search);
  const base = params.get('bundle') ?? 'bundle';
  const status = document.getElementById('status')!;
  let bundle: Bundle;
  try {
    bundle = await loadBundle(fetchFetcher(base));
  } catch (e) {
    status.textContent = `Failed to load bundle "${base}": ${String(e)}`;
    return;
  }
  status.textContent =
    `${bundle.manifest.dataset}: ${bundle.manifest.frames} frames` +
    (bundle.manifest.breakthrough_frame !== null
      ? `, breakthrough at ${bundle.manifest.breakthrough_frame}`
      : ', no breakthrough');

  const state = new ViewerState(bundle);
  const colors = new NodeColors(Date.now() & 0xffff);
  const canvas = document.getElementById('view') as HTMLCanvasElement;
  const ctx = canvas.getContext('2d')!;

  const timemap = bundle.timemapPng ? await decodePng(bundle.timemapPng) : null;
  const frameCache = new Map<number, ImageBitmap>();
  async function backgroundFor(tau: number): Promise<ImageBitmap | null> {
    const png = bundle.frameImages.get(tau);
    if (!png) return timemap;
    let img = frameCache.get(tau);
    if (!img) {
      img = await decodePng(png);
      frameCache.set(tau, img);
    }
    return img;
  }

  const imageW = timemap?.width ?? 1;
  const imageH = timemap?.height ?? 1;

  async function redraw(): Promise<void> {
    const background = await backgroundFor(state.selectedFrame);
    renderFrameView(
      ctx,
      state,
      {
        width: canvas.width,
        height: canvas.height,
        chartHeight: 160,
        background: background ?? undefined,
        imageWidth: imageW,
        imageHeight: imageH,
      },
      colors,
    );
  }

  const slider = document.getElementById('frame') as HTMLInputElement;
  slider.min = '1';
  slider.max = String(state.lastFrame);
  slider.value = '1';
  slider.oninput = () => {
    state.selectFrame(Number(slider.value));
    void redraw();
  };

  const metricSel = document.getElementById('metric') as HTMLSelectElement;
  metricSel.onchange = () => {
    state.metric = metricSel.value as Metric;
    void redraw();
  };

  const colorSel = document.getElementById('colormode') as HTMLSelectElement;
  colorSel.onchange = () => {
    state.colorMode = colorSel.value as 'node-type' | 'random';
    void redraw();
  };

  for (const key of [
    'hidePostBreakthrough',
    'showGraphUntilFrame',
    'hideTrivialNodes',
  ] as const) {
    const box = document.getElementById(key) as HTMLInputElement;
    box.onchange = () => {
      state.toggles[key] = box.checked;
      void redraw();
    };
  }

  document.getElementById('export')!.onclick = () => {
    const csv = state.exportCsv();
    const a = document.createElement('a');
    a.href = URL.createObjectURL(new Blob([csv], { type: 'text/csv' }));
    a.download = `${bundle.manifest.dataset}_frames.csv`;
    a.click();
  };

  await redraw();
}

void start();
