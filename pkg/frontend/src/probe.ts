import { ProbeRequest, ProbeResponse } from "./types.js";

export interface ProbeOverlay {
  verdict: "certified" | "falsified" | "unknown";
  color: string;
  windowCells: string[]; // "x" or "x,y" keys of the probed window
  differenceCells: string[]; // falsifying cells, when present
  label: string;
}

const COLORS = { certified: "#2e7d32", falsified: "#c62828", unknown: "#757575" };

export function windowCells(req: ProbeRequest, dimension: number): string[] {
  const cells: string[] = [];
  if (dimension === 1) {
    for (let dx = 0; dx <= req.window; dx++) cells.push(String(req.offset[0] + dx));
  } else {
    for (let dx = 0; dx <= req.window; dx++) {
      for (let dy = 0; dy <= req.window; dy++) {
        cells.push(`${req.offset[0] + dx},${req.offset[1] + dy}`);
      }
    }
  }
  return cells;
}

export function overlayFromProbe(req: ProbeRequest, res: ProbeResponse, dimension: number): ProbeOverlay {
  const label =
    res.verdict === "certified"
      ? `certified: blocks forever (cycle ${res.cycle_start}+${res.cycle_period})`
      : res.verdict === "falsified"
        ? `falsified: differs at step ${res.steps}`
        : `unknown: ${res.reason ?? "budget exhausted"}`;
  return {
    verdict: res.verdict,
    color: COLORS[res.verdict],
    windowCells: windowCells(req, dimension),
    differenceCells: (res.difference_cells ?? []).map((p) => p.join(",")),
    label,
  };
}
