/** Processed-text pane: token / tag / pronunciation rows with editable
 * per-word volume, pitch (steps), and duration shift cells. */

import type { PreprocessedToken, WordOverride } from "./api.js";

export interface GridState {
  tokens: PreprocessedToken[];
  overrides: WordOverride[]; // one per non-punctuation token, in order
}

export function emptyOverrides(tokens: PreprocessedToken[]): WordOverride[] {
  return tokens.filter((t) => t.kind !== "punct").map(() => ({}));
}

export function renderGrid(
  container: HTMLElement,
  state: GridState,
  onEdit: (wordIndex: number, field: keyof WordOverride, value: number) => void,
): void {
  container.innerHTML = "";
  const table = document.createElement("table");
  table.className = "grid";
  const head = table.insertRow();
  for (const title of ["Token", "Kind", "Tag", "Pronunciation",
                       "Vol ×", "Pitch +", "Dur ×"]) {
    const th = document.createElement("th");
    th.textContent = title;
    head.appendChild(th);
  }
  let wordIndex = -1;
  for (const token of state.tokens) {
    const isWord = token.kind !== "punct";
    if (isWord) wordIndex++;
    const row = table.insertRow();
    row.insertCell().textContent = token.text;
    row.insertCell().textContent = token.kind;
    row.insertCell().textContent = token.tag ?? "";
    row.insertCell().textContent = token.pronunciation.join(" ");
    if (!isWord) {
      for (let i = 0; i < 3; i++) row.insertCell();
      continue;
    }
    const fields: [keyof WordOverride, number][] = [
      ["volume", 1], ["pitch_steps", 0], ["duration", 1],
    ];
    const index = wordIndex;
    for (const [field, neutral] of fields) {
      const cell = row.insertCell();
      const input = document.createElement("input");
      input.type = "number";
      input.step = "0.1";
      input.value = String(state.overrides[index]?.[field] ?? neutral);
      input.addEventListener("change", () => {
        onEdit(index, field, Number(input.value));
      });
      cell.appendChild(input);
    }
  }
  container.appendChild(table);
}
