/** Integration against the real service: settings round-trip, curve
 * preview equality, and UI-vs-CLI waveform identity. Spawns the Python
 * backend with a generated fixture bank; skips when Python is missing. */

import { createHash } from "node:crypto";
import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { applyDrag, docsEqual, getCurve, setCurve } from "../src/settings.js";

const PORT = 8694;
const BASE = `http://127.0.0.1:${PORT}`;

function havePython(): boolean {
  try {
    execFileSync("python3", ["-c", "import diphonetts"], { stdio: "ignore" });
    return true;
  } catch {
    return false;
  }
}

const enabled = havePython();
let server: ChildProcess | null = null;
let workDir = "";
let bankDir = "";
const api = new ApiClient(BASE);

beforeAll(async () => {
  if (!enabled) return;
  workDir = mkdtempSync(join(tmpdir(), "prosody-studio-"));
  bankDir = join(workDir, "bank");
  execFileSync("python3", ["-m", "diphonetts.cli", "make-fixture-bank", bankDir],
    { stdio: "ignore" });
  server = spawn("python3",
    ["-m", "diphonetts.cli", "serve", "--port", String(PORT), "--bank", bankDir],
    { stdio: "ignore" });
  for (let i = 0; i < 100; i++) {
    try {
      await api.health();
      return;
    } catch {
      await new Promise((resolve) => setTimeout(resolve, 200));
    }
  }
  throw new Error("backend did not come up");
}, 120_000);

afterAll(() => {
  server?.kill();
});

describe.skipIf(!enabled)("service integration", () => {
  it("settings round-trip: edit a curve point, save, reload", async () => {
    const original = await api.getSettings();
    const addr = {
      family: "sentence" as const,
      terminator: "question" as const,
      variable: "pitch" as const,
    };
    let curve = getCurve(original, addr);
    curve = { points: [...curve.points, [0.75, 4.5]], kind: "sinusoidal" };
    curve = applyDrag(curve, 0, 0.1, 0.5, [0, 1], [-12, 12]);
    const edited = setCurve(original, addr, curve);

    const saved = await api.putSettings(edited);
    const reloaded = await api.getSettings();
    expect(docsEqual(saved, reloaded)).toBe(true);
    expect(docsEqual(edited, reloaded)).toBe(true);
    expect(getCurve(reloaded, addr).kind).toBe("sinusoidal");

    await api.putSettings(original); // restore for the other tests
  });

  it("curve preview equals server evaluation at 100 sampled x values",
    async () => {
      const curve = {
        points: [[0, 0], [0.3, 2.5], [0.7, -1], [1, 4]] as [number, number][],
        kind: "quintic" as const,
      };
      // what the editor renders
      const polyline = await api.curvePreview(curve, 0, 1, 100);
      expect(polyline.xs).toHaveLength(100);
      // the server's evaluation at exactly those xs
      const response = await fetch(`${BASE}/curves/preview`, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          points: curve.points, kind: curve.kind, xs: polyline.xs,
        }),
      });
      const direct = await response.json();
      for (let i = 0; i < 100; i++) {
        expect(Math.abs(polyline.ys[i] - direct.ys[i])).toBeLessThan(1e-12);
      }
      // control points are on the rendered line
      const atKnot = await api.curvePreview(curve, 0.3, 0.3, 2);
      expect(atKnot.ys[0]).toBeCloseTo(2.5, 9);
    });

  it("UI synthesis equals CLI synthesis byte for byte", async () => {
    const text = "The juice of lemons makes fine punch.";
    const settings = await api.getSettings();
    const fromUi = await api.synthesize(text, { seed: 21, settings });

    const outPath = join(workDir, "cli.wav");
    execFileSync("python3", [
      "-m", "diphonetts.cli", "say", text, "-o", outPath,
      "--bank", bankDir, "--seed", "21",
    ], { stdio: "ignore" });
    const fromCli = readFileSync(outPath);

    const uiHash = createHash("sha256")
      .update(Buffer.from(fromUi.wav)).digest("hex");
    const cliHash = createHash("sha256").update(fromCli).digest("hex");
    expect(uiHash).toBe(cliHash);
  }, 60_000);

  it("preprocess returns the token/tag/pronunciation table", async () => {
    const tokens = await api.preprocess("I dove towards the dove.");
    expect(tokens.map((t) => t.text)).toEqual(
      ["I", "dove", "towards", "the", "dove", "."]);
    expect(tokens[1].tag).toBe("V");
    expect(tokens[4].tag).toBe("N");
    expect(tokens[1].pronunciation).not.toEqual(tokens[4].pronunciation);
  });

  it("word overrides reach synthesis", async () => {
    const text = "hello there";
    const base = await api.synthesize(text, { seed: 4 });
    const shifted = await api.synthesize(text, {
      seed: 4,
      wordOverrides: [{ pitch_steps: 12 }, {}],
    });
    const hash = (buffer: ArrayBuffer) =>
      createHash("sha256").update(Buffer.from(buffer)).digest("hex");
    expect(hash(shifted.wav)).not.toBe(hash(base.wav));
  });
});
