import { Layer, State } from "./types.js";

/** Deterministic colors derived from the rule manifest so every state keeps
 * its hue across sessions.  The delimiter/color-like layer dominates the
 * fill; other layers modulate it. */

const NAMED: Record<string, string> = {
  // 2D color layer
  r1: "#c94040", r2: "#e06666", r3: "#a03030", r4: "#d64f4f",
  w: "#ffffff", g: "#2e8b57",
  // 1D delimiter layer
  "<": "#7986cb", ">": "#3f51b5", p: "#ffb300", xr: "#8e24aa", xl: "#ab47bc", x0: "#6a1b9a",
  // generic bits
  "0": "#ffffff", "1": "#222222",
};

function hashColor(s: string): string {
  let h = 2166136261;
  for (let i = 0; i < s.length; i++) {
    h = Math.imul(h ^ s.charCodeAt(i), 16777619);
  }
  const hue = ((h >>> 0) % 360 + 360) % 360;
  return `hsl(${hue}, 55%, 55%)`;
}

export function symbolColor(sym: string): string {
  return NAMED[sym] ?? hashColor(sym);
}

/** The layer whose value paints the cell background. */
export function paintLayer(layers: Layer[]): number {
  const names = layers.map((l) => l.name);
  for (const preferred of ["color", "delim", "bit"]) {
    const i = names.indexOf(preferred);
    if (i >= 0) return i;
  }
  return layers.length - 1;
}

export function cellFill(layers: Layer[], state: State, background: State): string {
  const li = paintLayer(layers);
  if (state.every((v, i) => v === background[i])) return "#ffffff";
  const base = state[li];
  if (base !== background[li] && base !== "_") return symbolColor(base);
  // fall back to the first non-background layer value
  for (let i = 0; i < state.length; i++) {
    if (state[i] !== background[i]) return symbolColor(`${layers[i].name}:${state[i]}`);
  }
  return "#ffffff";
}

export function glyph(layers: Layer[], state: State): string {
  // heads and particles get a letter on top of the fill
  for (let i = 0; i < layers.length; i++) {
    const name = layers[i].name;
    if ((name === "head" || name === "part") && state[i] !== "_") {
      return state[i][0].toUpperCase();
    }
  }
  return "";
}
