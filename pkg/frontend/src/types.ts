export type State = string[];

export interface Layer {
  name: string;
  symbols: string[];
}

export interface SessionInfo {
  id: number;
  step: number;
  dimension: number;
  layers: Layer[];
  background: State;
}

export interface ViewCell {
  pos: number[];
  state: State;
}

export interface ViewResponse {
  step: number;
  box: number[][];
  background: State;
  cells: ViewCell[];
}

export type ProbeVerdict = "certified" | "falsified" | "unknown";

export interface ProbeResponse {
  verdict: ProbeVerdict;
  cycle_start?: number;
  cycle_period?: number;
  steps?: number;
  difference_cells?: number[][];
  reason?: string;
}

export interface ProbeRequest {
  offset: number[];
  window: number;
  horizon?: number;
  margin?: number;
  box?: number[];
}
