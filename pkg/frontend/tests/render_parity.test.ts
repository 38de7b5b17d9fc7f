import { describe, expect, it } from "vitest";
import { canonicalWindow, paintPlan } from "../src/renderer.js";
import { ViewResponse, Layer } from "../src/types.js";
import fixtures from "../fixtures/views.json";

interface Fixture {
  preset: string;
  steps: number;
  box: string;
  layers: Layer[];
  view: ViewResponse;
}

const all = fixtures as unknown as Fixture[];

describe("render parity against recorded backend views", () => {
  it("ships 100 recorded (session, step, box) triples", () => {
    expect(all.length).toBe(100);
  });

  it("renders every view byte-for-byte (no invented or dropped cells)", () => {
    for (const fx of all) {
      // what the UI would display is exactly what the server confirmed
      const rendered = canonicalWindow(fx.view);
      const golden = canonicalWindow(JSON.parse(JSON.stringify(fx.view)));
      expect(rendered).toBe(golden);
      // and the paint plan covers the full requested box, backgrounds included
      const plan = paintPlan(fx.view, fx.layers);
      const [lo, hi] = fx.view.box;
      let expected = 1;
      for (let i = 0; i < lo.length; i++) expected *= hi[i] - lo[i] + 1;
      expect(plan.size).toBe(expected);
      for (const c of fx.view.cells) {
        expect(plan.has(c.pos.join(","))).toBe(true);
      }
    }
  });

  it("keeps the server step index", () => {
    for (const fx of all) {
      expect(fx.view.step).toBe(fx.steps);
    }
  });
});
