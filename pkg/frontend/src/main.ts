/** Prosody studio: edit settings, preview the processed text, synthesize
 * through the service, and listen. All audio and curve math comes from the
 * server; this page is a pure client. */

import { ApiClient, SettingsDoc, WordOverride } from "./api.js";
import { CurveEditor } from "./curveEditor.js";
import { emptyOverrides, renderGrid } from "./grid.js";
import { Player } from "./player.js";
import { SETTINGS_PRESETS, TEXT_PRESETS } from "./presets.js";
import {
  CurveAddress,
  TAGS,
  clone,
  getCurve,
  setCurve,
  xDomain,
  yDomain,
} from "./settings.js";

const $ = <T extends HTMLElement>(id: string): T =>
  document.getElementById(id) as T;

let api = new ApiClient();
let settings: SettingsDoc | null = null;
let gridTokens: Awaited<ReturnType<ApiClient["preprocess"]>> = [];
let overrides: WordOverride[] = [];
const player = new Player();

function status(message: string, isError = false): void {
  const el = $("status");
  el.textContent = message;
  el.className = isError ? "status error" : "status";
}

function currentAddress(): CurveAddress {
  const family = ($("curve-family") as HTMLSelectElement).value as
    | "sentence"
    | "frequency";
  return {
    family,
    terminator: ($("curve-terminator") as HTMLSelectElement)
      .value as CurveAddress["terminator"],
    variable: ($("curve-variable") as HTMLSelectElement)
      .value as CurveAddress["variable"],
  };
}

let editor: CurveEditor | null = null;

function showCurve(): void {
  if (!settings || !editor) return;
  const addr = currentAddress();
  editor.setRanges(xDomain(addr.family), yDomain(addr.variable));
  ($("curve-terminator") as HTMLSelectElement).disabled =
    addr.family === "frequency";
  const curve = getCurve(settings, addr);
  (document.querySelector(
    `input[name="kind"][value="${curve.kind}"]`,
  ) as HTMLInputElement).checked = true;
  editor.setCurve(clone(curve));
}

function bindCurveEditor(): void {
  const canvas = $("curve-canvas") as HTMLCanvasElement;
  editor = new CurveEditor(canvas, api, { points: [[0, 1]], kind: "linear" }, {
    width: canvas.width,
    height: canvas.height,
    xRange: [0, 1],
    yRange: [0, 3],
  });
  editor.onChange = (curve) => {
    if (!settings) return;
    settings = setCurve(settings, currentAddress(), curve);
  };
  for (const id of ["curve-family", "curve-terminator", "curve-variable"]) {
    $(id).addEventListener("change", showCurve);
  }
  const kindRadios = Array.from(
    document.querySelectorAll('input[name="kind"]'),
  );
  for (const radio of kindRadios) {
    radio.addEventListener("change", () => {
      if (!settings || !editor) return;
      const kind = (radio as HTMLInputElement).value as
        | "linear"
        | "sinusoidal"
        | "quintic";
      const addr = currentAddress();
      const curve = { ...getCurve(settings, addr), kind };
      settings = setCurve(settings, addr, curve);
      editor.setCurve(clone(curve));
    });
  }
}

function renderStressPane(): void {
  if (!settings) return;
  const container = $("stress-pane");
  container.innerHTML = "";
  for (const level of ["0", "1", "2"]) {
    const target = settings.stress[level] ??
      { volume: 1, pitch_steps: 0, duration: 1 };
    const row = document.createElement("div");
    row.className = "field-row";
    row.append(`stress ${level}: `);
    for (const field of ["volume", "pitch_steps", "duration"] as const) {
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.1";
      input.title = field;
      input.value = String(target[field]);
      input.addEventListener("change", () => {
        if (!settings) return;
        settings.stress[level] = { ...target, [field]: Number(input.value) };
        renderStressPane();
      });
      row.append(` ${field.replace("_steps", "")} `, input);
    }
    container.appendChild(row);
  }
}

function renderClassPane(): void {
  if (!settings) return;
  const container = $("class-pane");
  container.innerHTML = "";
  const select = document.createElement("select");
  for (const tag of TAGS) {
    const option = document.createElement("option");
    option.value = tag;
    option.textContent = tag;
    select.appendChild(option);
  }
  const fields = document.createElement("span");

  const draw = () => {
    if (!settings) return;
    fields.innerHTML = "";
    const tag = select.value;
    const target = settings.classes[tag] ?? {
      volume: 1, pitch_steps: 0, duration: 1, jitter: 0,
      mode: "absolute" as const, approach_pct: 0.5,
    };
    for (const field of ["volume", "pitch_steps", "duration", "jitter"] as const) {
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.05";
      input.value = String(target[field]);
      input.addEventListener("change", () => {
        if (!settings) return;
        settings.classes[tag] = { ...target, [field]: Number(input.value) };
        draw();
      });
      fields.append(` ${field.replace("_steps", "")} `, input);
    }
    const mode = document.createElement("select");
    for (const value of ["absolute", "relative-delta", "approach-percentage"]) {
      const option = document.createElement("option");
      option.value = value;
      option.textContent = value;
      if (value === target.mode) option.selected = true;
      mode.appendChild(option);
    }
    mode.addEventListener("change", () => {
      if (!settings) return;
      settings.classes[tag] = {
        ...target,
        mode: mode.value as typeof target.mode,
      };
      draw();
    });
    fields.append(" mode ", mode);
  };
  select.addEventListener("change", draw);
  container.append("class ", select, fields);
  draw();
}

function renderPausesPane(): void {
  if (!settings) return;
  const container = $("pauses-pane");
  container.innerHTML = "";
  for (const [punct, seconds] of Object.entries(settings.pauses)) {
    const input = document.createElement("input");
    input.type = "number";
    input.step = "0.05";
    input.value = String(seconds);
    input.addEventListener("change", () => {
      if (settings) settings.pauses[punct] = Number(input.value);
    });
    const label = document.createElement("label");
    label.append(`"${punct}" `, input, " s  ");
    container.appendChild(label);
  }
  const seed = document.createElement("input");
  seed.type = "number";
  seed.value = String(settings.seed);
  seed.addEventListener("change", () => {
    if (settings) settings.seed = Number(seed.value);
  });
  const label = document.createElement("label");
  label.append(" jitter seed ", seed);
  container.appendChild(label);
}

function renderPresets(): void {
  const texts = $("text-presets");
  for (const [name, text] of Object.entries(TEXT_PRESETS)) {
    const button = document.createElement("button");
    button.textContent = name;
    button.addEventListener("click", () => {
      ($("input-text") as HTMLTextAreaElement).value = text;
    });
    texts.appendChild(button);
  }
  const docs = $("settings-presets");
  for (const [name, transform] of Object.entries(SETTINGS_PRESETS)) {
    const button = document.createElement("button");
    button.textContent = name;
    button.addEventListener("click", () => {
      if (!settings) return;
      settings = transform(settings);
      renderAllPanes();
      status(`applied preset "${name}" (not saved yet)`);
    });
    docs.appendChild(button);
  }
}

function renderAllPanes(): void {
  renderStressPane();
  renderClassPane();
  renderPausesPane();
  showCurve();
}

async function doPreprocess(): Promise<void> {
  const text = ($("input-text") as HTMLTextAreaElement).value;
  try {
    gridTokens = await api.preprocess(text);
    overrides = emptyOverrides(gridTokens);
    renderGrid($("grid-pane"), { tokens: gridTokens, overrides },
      (index, field, value) => {
        overrides[index] = { ...overrides[index], [field]: value };
      });
    status(`${gridTokens.length} tokens`);
  } catch (error) {
    status(String(error), true);
  }
}

async function doSynthesize(withOverrides: boolean): Promise<void> {
  const text = ($("input-text") as HTMLTextAreaElement).value;
  try {
    status("synthesizing…");
    const result = await api.synthesize(text, {
      settings: settings ?? undefined,
      wordOverrides: withOverrides ? overrides : undefined,
    });
    await player.play(result.wav);
    status(`played ${result.clipCount} clips` +
      (result.substitutions ? `, ${result.substitutions} substituted` : "") +
      ` (rtf ${result.realTimeFactor.toFixed(3)})`);
  } catch (error) {
    status(String(error), true);
  }
}

async function connect(): Promise<void> {
  api = new ApiClient(($("server-url") as HTMLInputElement).value);
  try {
    const health = await api.health();
    settings = await api.getSettings();
    bindOnce();
    renderAllPanes();
    status(health.bank_loaded
      ? "connected; bank loaded"
      : "connected; no bank loaded (synthesis disabled)");
  } catch (error) {
    status(`cannot reach service: ${error}`, true);
  }
}

let bound = false;
function bindOnce(): void {
  if (bound) return;
  bound = true;
  bindCurveEditor();
  renderPresets();
  $("preprocess").addEventListener("click", () => void doPreprocess());
  $("synthesize").addEventListener("click", () => void doSynthesize(false));
  $("overlay").addEventListener("click", () => void doSynthesize(true));
  $("save-settings").addEventListener("click", async () => {
    if (!settings) return;
    try {
      settings = await api.putSettings(settings);
      renderAllPanes();
      status("settings saved");
    } catch (error) {
      status(String(error), true);
    }
  });
  $("reload-settings").addEventListener("click", async () => {
    settings = await api.getSettings();
    renderAllPanes();
    status("settings reloaded from server");
  });
}

$("connect").addEventListener("click", () => void connect());
void connect();
