import { Api } from "./api.js";
import { canonicalWindow } from "./renderer.js";
import { ProbeOverlay } from "./probe.js";
import { SessionInfo, State, ViewResponse } from "./types.js";

export interface PendingEdit {
  kind: "edit" | "inject";
  pos: number[];
  state?: State;
  particle?: string;
}

/** Session state for the explorer.  Rendered cells always reflect the last
 * server-confirmed step: the view is only replaced by server responses, and
 * edits made while running are queued and flushed at step boundaries. */
export class ViewModel {
  session: SessionInfo | null = null;
  view: ViewResponse | null = null;
  running = false;
  stepRate = 4; // steps per tick
  probe: ProbeOverlay | null = null;
  private queue: PendingEdit[] = [];

  constructor(private api: Api) {}

  async load(preset: string, box: string) {
    this.session = await this.api.createSession(preset);
    this.probe = null;
    this.queue = [];
    await this.refresh(box);
  }

  get step(): number {
    return this.view?.step ?? this.session?.step ?? 0;
  }

  async refresh(box: string) {
    if (!this.session) return;
    this.view = await this.api.view(this.session.id, box);
  }

  /** Edits apply immediately when paused; while running they wait for the
   * next step boundary so the canvas never shows unconfirmed state. */
  requestEdit(edit: PendingEdit): "applied" | "queued" {
    if (this.running) {
      this.queue.push(edit);
      return "queued";
    }
    void this.flushEdits([edit]);
    return "applied";
  }

  pendingEdits(): readonly PendingEdit[] {
    return this.queue;
  }

  async stepOnce(box: string, n = 1) {
    if (!this.session) return;
    await this.flushEdits(this.queue.splice(0));
    await this.api.step(this.session.id, n);
    await this.refresh(box);
  }

  async tick(box: string) {
    if (!this.running) return;
    await this.stepOnce(box, this.stepRate);
  }

  private async flushEdits(edits: PendingEdit[]) {
    if (!this.session) return;
    const cellEdits = edits.filter((e) => e.kind === "edit");
    if (cellEdits.length) {
      await this.api.edit(
        this.session.id,
        cellEdits.map((e) => ({ pos: e.pos, state: e.state! })),
      );
    }
    for (const inj of edits.filter((e) => e.kind === "inject")) {
      await this.api.inject(this.session.id, inj.pos, inj.particle!);
    }
  }

  /** Byte-comparable form of what the grid shows (parity with GET /view). */
  renderedWindow(): string | null {
    return this.view ? canonicalWindow(this.view) : null;
  }
}
