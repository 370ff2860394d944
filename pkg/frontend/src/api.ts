/** Typed client for the diphonetts HTTP service. */

export type CurveKind = "linear" | "sinusoidal" | "quintic";

export interface CurveDoc {
  points: [number, number][];
  kind: CurveKind;
}

export interface StressTarget {
  volume: number;
  pitch_steps: number;
  duration: number;
}

export interface ClassTarget extends StressTarget {
  jitter: number;
  mode: "absolute" | "relative-delta" | "approach-percentage";
  approach_pct: number;
}

export interface SettingsDoc {
  stress: Record<string, StressTarget>;
  classes: Record<string, ClassTarget>;
  curves: Record<string, Record<string, CurveDoc>>;
  frequency_curves: Record<string, CurveDoc>;
  pauses: Record<string, number>;
  clamps: Record<string, [number, number]>;
  seed: number;
  bracket_banks: Record<string, string>;
}

export interface PreprocessedToken {
  text: string;
  kind: string;
  tag: string | null;
  pronunciation: string[];
}

export interface WordOverride {
  volume?: number;
  pitch_steps?: number;
  duration?: number;
}

export interface SynthesisResult {
  wav: ArrayBuffer;
  clipCount: number;
  substitutions: number;
  realTimeFactor: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

async function jsonOrThrow(response: Response): Promise<any> {
  if (!response.ok) {
    const body = await response.text();
    throw new ApiError(response.status, body || response.statusText);
  }
  return response.json();
}

export class ApiClient {
  constructor(public baseUrl: string = "http://127.0.0.1:8575") {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async health(): Promise<{ status: string; bank_loaded: boolean }> {
    return jsonOrThrow(await fetch(this.url("/health")));
  }

  async getSettings(): Promise<SettingsDoc> {
    return jsonOrThrow(await fetch(this.url("/settings")));
  }

  async putSettings(doc: SettingsDoc): Promise<SettingsDoc> {
    return jsonOrThrow(
      await fetch(this.url("/settings"), {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      }),
    );
  }

  async preprocess(text: string): Promise<PreprocessedToken[]> {
    const body = await jsonOrThrow(
      await fetch(this.url("/preprocess"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({ text }),
      }),
    );
    return body.tokens;
  }

  async synthesize(
    text: string,
    options: {
      seed?: number;
      settings?: SettingsDoc;
      wordOverrides?: WordOverride[];
    } = {},
  ): Promise<SynthesisResult> {
    const response = await fetch(this.url("/synthesize"), {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({
        text,
        seed: options.seed ?? null,
        settings: options.settings ?? null,
        word_overrides: options.wordOverrides ?? null,
      }),
    });
    if (!response.ok) {
      throw new ApiError(response.status, await response.text());
    }
    return {
      wav: await response.arrayBuffer(),
      clipCount: Number(response.headers.get("X-Clip-Count") ?? 0),
      substitutions: Number(response.headers.get("X-Substitutions") ?? 0),
      realTimeFactor: Number(response.headers.get("X-Real-Time-Factor") ?? 0),
    };
  }

  /** Server-side curve evaluation; the editor never re-implements splines. */
  async curvePreview(
    curve: CurveDoc,
    lo: number,
    hi: number,
    samples = 100,
  ): Promise<{ xs: number[]; ys: number[] }> {
    return jsonOrThrow(
      await fetch(this.url("/curves/preview"), {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify({
          points: curve.points,
          kind: curve.kind,
          lo,
          hi,
          samples,
        }),
      }),
    );
  }
}
