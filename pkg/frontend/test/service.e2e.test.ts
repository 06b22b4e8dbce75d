// Live-service contract test. Skipped unless SERVICE_URL points at a
// running instance with a single-layer model loaded, e.g.
//   beadshape serve --model model1.json --port 8080
//   SERVICE_URL=http://127.0.0.1:8080 npm test

import { describe, expect, it } from "vitest";

import { ServiceClient } from "../src/api.js";
import { applyResponse, badges, claimSeq, initialState } from "../src/state.js";
import { buildPlotModel, mirrorMismatch } from "../src/plot.js";
import { PrintParams } from "../src/types.js";

const url = process.env.SERVICE_URL;

const E1: PrintParams = {
  rho: 2100, mu: 7.5, tau0: 630, phi_n: 25, h_n: 7.5, v_p: 50, u_f: 40.5,
};

describe.skipIf(!url)("live service contract", () => {
  const client = new ServiceClient(url ?? "");

  it("serves ranges for the form", async () => {
    const doc = await client.ranges();
    expect(Object.keys(doc.parameters)).toContain("tau0");
    expect(doc.parameters.tau0.lo).toBeGreaterThan(0);
  });

  it("renders a closed symmetric profile with w/h/A for the reference case", async () => {
    const doc = await client.predict({ params: E1, layers: 1 });
    expect(doc.points.length).toBeGreaterThan(32);
    expect(mirrorMismatch(doc.points)).toBeLessThan(1e-6);
    expect(doc.features).not.toBeNull();
    expect(doc.features!.width).toBeGreaterThan(0);
    expect(doc.features!.height).toBeGreaterThan(0);
    expect(doc.features!.area).toBeGreaterThan(0);
    const model = buildPlotModel(doc, [], E1.phi_n);
    expect(model.profilePath.endsWith("Z")).toBe(true);
    expect(model.annotations.some((l) => l.startsWith("w = "))).toBe(true);
  });

  it("shows a range badge when the scaled yield stress leaves the box", async () => {
    const params: PrintParams = {
      rho: 2000, mu: 10, tau0: 1500, phi_n: 5, h_n: 12, v_p: 40, u_f: 40,
    };
    const st = initialState(params);
    const doc = await client.predict({ params, layers: 1 });
    applyResponse(st, claimSeq(st), params, doc);
    const rangeBadges = badges(st).filter((b) => b.kind === "range");
    expect(rangeBadges.length).toBeGreaterThan(0);
    expect(rangeBadges[0].text).toContain("tau0_star");
  });

  it("shows the buckling badge with its threshold", async () => {
    const params: PrintParams = {
      rho: 2100, mu: 10, tau0: 630, phi_n: 10, h_n: 30, v_p: 20, u_f: 40,
    };
    const st = initialState(params);
    const doc = await client.predict({ params, layers: 1 });
    applyResponse(st, claimSeq(st), params, doc);
    const buckling = badges(st).filter(
      (b) => b.kind === "printability" && b.text.includes("buckling"),
    );
    expect(buckling).toHaveLength(1);
    expect(buckling[0].text).toContain("threshold 0.667");
  });
});
