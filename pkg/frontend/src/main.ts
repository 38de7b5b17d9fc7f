import { Api } from "./api.js";
import { overlayFromProbe } from "./probe.js";
import { Viewport, drawView, screenToWorld } from "./renderer.js";
import { ViewModel } from "./viewmodel.js";

/** Browser wiring: canvas grid with pan/zoom, edit and stamp tools, playback,
 * and the probe panel.  All evolution comes from the backend. */

const api = new Api("");
const vm = new ViewModel(api);

const canvas = document.getElementById("grid") as HTMLCanvasElement;
const ctx = canvas.getContext("2d")!;
const presetSel = document.getElementById("preset") as HTMLSelectElement;
const stepBtn = document.getElementById("step") as HTMLButtonElement;
const runBtn = document.getElementById("run") as HTMLButtonElement;
const rate = document.getElementById("rate") as HTMLInputElement;
const stepLabel = document.getElementById("step-label")!;
const probeBtn = document.getElementById("probe") as HTMLButtonElement;
const probeLabel = document.getElementById("probe-label")!;
const toolSel = document.getElementById("tool") as HTMLSelectElement;
const banner = document.getElementById("banner")!;

const vp: Viewport = { lo: [-24, -12], hi: [24, 12], cellSize: 18, originX: 10, originY: 10 };

function boxParam(): string {
  const d = vm.session?.dimension ?? 1;
  return d === 1 ? `${vp.lo[0]},${vp.hi[0]}` : `${vp.lo[0]},${vp.lo[1]},${vp.hi[0]},${vp.hi[1]}`;
}

function redraw() {
  if (!vm.view || !vm.session) return;
  const overlay = new Map<string, string>();
  if (vm.probe) {
    for (const key of vm.probe.windowCells) overlay.set(key, vm.probe.color);
    for (const key of vm.probe.differenceCells) overlay.set(key, "#ff9800");
    probeLabel.textContent = vm.probe.label;
  }
  drawView(ctx, vp, vm.view, vm.session.layers, overlay);
  stepLabel.textContent = `step ${vm.step}` + (vm.pendingEdits().length ? ` (+${vm.pendingEdits().length} queued)` : "");
}

async function reload() {
  try {
    await vm.load(presetSel.value, boxParam());
    banner.textContent = "";
    redraw();
  } catch (e) {
    banner.textContent = `connection lost: ${e}`;
    vm.running = false;
  }
}

async function boot() {
  const { presets } = await api.presets();
  for (const name of presets) {
    const opt = document.createElement("option");
    opt.value = opt.textContent = name;
    presetSel.appendChild(opt);
  }
  presetSel.value = presets.includes("rule-110") ? "rule-110" : presets[0];
  presetSel.onchange = reload;
  await reload();
}

stepBtn.onclick = async () => {
  await vm.stepOnce(boxParam());
  redraw();
};

runBtn.onclick = () => {
  vm.running = !vm.running;
  runBtn.textContent = vm.running ? "pause" : "run";
};

setInterval(async () => {
  vm.stepRate = parseInt(rate.value, 10) || 1;
  try {
    await vm.tick(boxParam());
    if (vm.running) redraw();
  } catch (e) {
    banner.textContent = `connection lost: ${e}`;
    vm.running = false;
    runBtn.textContent = "run";
  }
}, 250);

let dragging: { x: number; y: number } | null = null;
canvas.onmousedown = (ev) => {
  if (toolSel.value === "pan") dragging = { x: ev.offsetX, y: ev.offsetY };
};
canvas.onmouseup = () => (dragging = null);
canvas.onmousemove = (ev) => {
  if (!dragging) return;
  const dx = Math.round((dragging.x - ev.offsetX) / vp.cellSize);
  const dy = Math.round((ev.offsetY - dragging.y) / vp.cellSize);
  if (dx || dy) {
    vp.lo[0] += dx; vp.hi[0] += dx;
    if (vp.lo.length > 1) { vp.lo[1] += dy; vp.hi[1] += dy; }
    dragging = { x: ev.offsetX, y: ev.offsetY };
    void vm.refresh(boxParam()).then(redraw);
  }
};
canvas.onwheel = (ev) => {
  ev.preventDefault();
  vp.cellSize = Math.max(4, Math.min(40, vp.cellSize + (ev.deltaY < 0 ? 2 : -2)));
  redraw();
};

canvas.onclick = async (ev) => {
  if (!vm.session || toolSel.value === "pan") return;
  const pos = screenToWorld(vp, ev.offsetX, ev.offsetY).slice(0, vm.session.dimension);
  if (toolSel.value === "particle") {
    const kind = vm.session.dimension === 2 ? "pr" : "p";
    vm.requestEdit({ kind: "inject", pos, particle: kind });
  } else {
    // paint tool: cycle the paint layer's first non-background symbol
    const layers = vm.session.layers;
    const bg = vm.session.background;
    const cur = vm.view?.cells.find((c) => c.pos.join(",") === pos.join(","))?.state ?? bg;
    const li = layers.length - 1;
    const symbols = layers[li].symbols;
    const next = symbols[(symbols.indexOf(cur[li]) + 1) % symbols.length];
    const state = [...cur];
    state[li] = next;
    vm.requestEdit({ kind: "edit", pos, state });
  }
  if (!vm.running) {
    await vm.refresh(boxParam());
    redraw();
  }
};

probeBtn.onclick = async () => {
  if (!vm.session) return;
  const offset = (document.getElementById("probe-offset") as HTMLInputElement).value
    .split(",").map((s) => parseInt(s, 10));
  const windowSize = parseInt((document.getElementById("probe-window") as HTMLInputElement).value, 10);
  const req = { offset, window: windowSize, horizon: 80, margin: 6 };
  try {
    const res = await api.probe(vm.session.id, req);
    vm.probe = overlayFromProbe(req, res, vm.session.dimension);
    redraw();
  } catch (e) {
    probeLabel.textContent = `probe failed: ${e}`;
  }
};

void boot();
