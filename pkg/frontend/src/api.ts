import { ProbeRequest, ProbeResponse, SessionInfo, State, ViewResponse } from "./types.js";

/** Thin typed client for the serve endpoints; the backend is the single
 * source of truth for all evolution. */
export class Api {
  constructor(private base: string = "") {}

  private async req<T>(method: string, path: string, body?: unknown): Promise<T> {
    const res = await fetch(this.base + path, {
      method,
      headers: body === undefined ? undefined : { "Content-Type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!res.ok) {
      throw new Error(`${method} ${path}: ${res.status} ${await res.text()}`);
    }
    return (await res.json()) as T;
  }

  presets(): Promise<{ presets: string[] }> {
    return this.req("GET", "/rules/presets");
  }

  createSession(preset: string): Promise<SessionInfo> {
    return this.req("POST", "/session", { preset });
  }

  step(id: number, n: number): Promise<{ step: number }> {
    return this.req("POST", `/session/${id}/step?n=${n}`);
  }

  edit(id: number, cells: { pos: number[]; state: State }[]): Promise<{ step: number }> {
    return this.req("POST", `/session/${id}/edit`, { cells });
  }

  inject(id: number, pos: number[], kind: string): Promise<{ step: number }> {
    return this.req("POST", `/session/${id}/inject`, { pos, kind });
  }

  view(id: number, box: string): Promise<ViewResponse> {
    return this.req("GET", `/session/${id}/view?box=${encodeURIComponent(box)}`);
  }

  probe(id: number, probe: ProbeRequest): Promise<ProbeResponse> {
    return this.req("POST", `/session/${id}/probe-blocking`, probe);
  }
}
