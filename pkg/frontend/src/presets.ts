/** Preset input texts and settings for one-click experimentation. */

import type { SettingsDoc } from "./api.js";
import { clone } from "./settings.js";

export const TEXT_PRESETS: Record<string, string> = {
  "Harvard 1.1": "The birch canoe slid on the smooth planks.",
  "Homographs": "I want to project my project onto the wall.",
  "Dove twice": "I dove towards the dove.",
  "Numbers": "Yes, I'm going to buy 10 apples for 1,024 dollars.",
  "Question": "Did the lazy cow lay in the cool grass?",
  "Exclamation": "Hoist the load to your left shoulder!",
};

/** Settings presets are expressed as transforms of the current document so
 * they never clobber unrelated panes. */
export const SETTINGS_PRESETS: Record<
  string,
  (doc: SettingsDoc) => SettingsDoc
> = {
  Neutral(doc) {
    const next = clone(doc);
    for (const stress of Object.values(next.stress)) {
      stress.volume = 1;
      stress.pitch_steps = 0;
      stress.duration = 1;
    }
    next.classes = {};
    for (const set of Object.values(next.curves)) {
      set.volume = { points: [[0, 1]], kind: "linear" };
      set.pitch = { points: [[0, 0]], kind: "linear" };
      set.duration = { points: [[0, 1]], kind: "linear" };
    }
    next.frequency_curves = {
      volume: { points: [[1, 1]], kind: "linear" },
      pitch: { points: [[1, 0]], kind: "linear" },
      duration: { points: [[1, 1]], kind: "linear" },
    };
    return next;
  },
  "Stressed vowels": (doc) => {
    const next = clone(doc);
    next.stress["1"] = { volume: 1.2, pitch_steps: 7, duration: 1.1 };
    next.stress["2"] = { volume: 1.1, pitch_steps: 3.5, duration: 1.05 };
    return next;
  },
  "Question rise": (doc) => {
    const next = clone(doc);
    next.curves.question.pitch = {
      points: [[0, 0], [0.7, 0], [1, 5]],
      kind: "sinusoidal",
    };
    next.curves.period.pitch = {
      points: [[0, 0], [0.8, 0], [1, -3]],
      kind: "sinusoidal",
    };
    return next;
  },
};
