import { describe, expect, it } from "vitest";
import { overlayFromProbe, windowCells } from "../src/probe.js";
import { ProbeRequest, ProbeResponse } from "../src/types.js";
import fixtures from "../fixtures/probes.json";

interface Scenario {
  preset: string;
  request: ProbeRequest;
  response: ProbeResponse;
}

const scenarios = fixtures as unknown as Scenario[];

describe("probe overlay agrees with recorded backend verdicts", () => {
  it("covers 10 scripted scenarios", () => {
    expect(scenarios.length).toBe(10);
  });

  it("maps every verdict onto the overlay unchanged", () => {
    for (const sc of scenarios) {
      const dim = sc.request.offset.length;
      const overlay = overlayFromProbe(sc.request, sc.response, dim);
      expect(overlay.verdict).toBe(sc.response.verdict);
      expect(overlay.windowCells.length).toBe(Math.pow(sc.request.window + 1, dim));
      if (sc.response.verdict === "falsified") {
        expect(overlay.label).toContain(`step ${sc.response.steps}`);
        expect(overlay.differenceCells.length).toBe(sc.response.difference_cells?.length ?? 0);
      }
      if (sc.response.verdict === "certified") {
        expect(overlay.label).toContain("blocks forever");
      }
    }
  });

  it("window cells enumerate the probed square", () => {
    expect(windowCells({ offset: [2], window: 1 }, 1)).toEqual(["2", "3"]);
    expect(windowCells({ offset: [1, 1], window: 1 }, 2)).toEqual(["1,1", "1,2", "2,1", "2,2"]);
  });
});
