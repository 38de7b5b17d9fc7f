import { cellFill, glyph } from "./palette.js";
import { Layer, State, ViewResponse } from "./types.js";

/** The renderer's model of a window: exactly the server-confirmed cells.
 * `canonicalWindow` is the byte-comparable form used by the parity tests:
 * rendering never invents or drops a cell. */

export interface Viewport {
  // world coordinates of the window and the pixel geometry
  lo: number[];
  hi: number[];
  cellSize: number;
  originX: number; // screen x of world lo[0]
  originY: number; // screen y of world hi[1] (y grows north in world space)
}

export function canonicalWindow(view: ViewResponse): string {
  const cells = [...view.cells].sort((a, b) => {
    for (let i = 0; i < a.pos.length; i++) {
      if (a.pos[i] !== b.pos[i]) return a.pos[i] - b.pos[i];
    }
    return 0;
  });
  return JSON.stringify({
    step: view.step,
    box: view.box,
    background: view.background,
    cells: cells.map((c) => ({ pos: c.pos, state: c.state })),
  });
}

/** Dense paint plan for a window: every world cell of the box with its fill,
 * derived only from the server view (no client-side evolution). */
export function paintPlan(view: ViewResponse, layers: Layer[]): Map<string, { fill: string; glyph: string }> {
  const dim = view.box[0].length;
  const byPos = new Map<string, State>();
  for (const c of view.cells) byPos.set(c.pos.join(","), c.state);
  const plan = new Map<string, { fill: string; glyph: string }>();
  const [lo, hi] = view.box;
  const coords: number[][] = [];
  if (dim === 1) {
    for (let x = lo[0]; x <= hi[0]; x++) coords.push([x]);
  } else {
    for (let x = lo[0]; x <= hi[0]; x++) for (let y = lo[1]; y <= hi[1]; y++) coords.push([x, y]);
  }
  for (const pos of coords) {
    const key = pos.join(",");
    const st = byPos.get(key) ?? view.background;
    plan.set(key, { fill: cellFill(layers, st, view.background), glyph: glyph(layers, st) });
  }
  return plan;
}

export function worldToScreen(vp: Viewport, pos: number[]): [number, number] {
  const x = vp.originX + (pos[0] - vp.lo[0]) * vp.cellSize;
  const y = pos.length === 1 ? vp.originY : vp.originY + (vp.hi[1] - pos[1]) * vp.cellSize;
  return [x, y];
}

export function screenToWorld(vp: Viewport, sx: number, sy: number): number[] {
  const x = vp.lo[0] + Math.floor((sx - vp.originX) / vp.cellSize);
  if (vp.lo.length === 1) return [x];
  const y = vp.hi[1] - Math.floor((sy - vp.originY) / vp.cellSize);
  return [x, y];
}

export function drawView(
  ctx: CanvasRenderingContext2D,
  vp: Viewport,
  view: ViewResponse,
  layers: Layer[],
  overlay?: Map<string, string>,
) {
  const plan = paintPlan(view, layers);
  ctx.clearRect(0, 0, ctx.canvas.width, ctx.canvas.height);
  for (const [key, cell] of plan) {
    const pos = key.split(",").map(Number);
    const [sx, sy] = worldToScreen(vp, pos);
    ctx.fillStyle = cell.fill;
    ctx.fillRect(sx, sy, vp.cellSize, vp.cellSize);
    ctx.strokeStyle = "rgba(0,0,0,0.15)";
    ctx.strokeRect(sx + 0.5, sy + 0.5, vp.cellSize - 1, vp.cellSize - 1);
    if (cell.glyph && vp.cellSize >= 10) {
      ctx.fillStyle = "#000";
      ctx.font = `${Math.floor(vp.cellSize * 0.6)}px monospace`;
      ctx.fillText(cell.glyph, sx + vp.cellSize * 0.25, sy + vp.cellSize * 0.75);
    }
  }
  if (overlay) {
    for (const [key, color] of overlay) {
      const pos = key.split(",").map(Number);
      const [sx, sy] = worldToScreen(vp, pos);
      ctx.strokeStyle = color;
      ctx.lineWidth = 2;
      ctx.strokeRect(sx + 1, sy + 1, vp.cellSize - 2, vp.cellSize - 2);
      ctx.lineWidth = 1;
    }
  }
}
