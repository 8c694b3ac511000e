import type { DraftState, ImportanceEntry, SentenceScore } from "./types";

const NEUTRAL_RGB: [number, number, number] = [229, 231, 235]; // gray
const ACCENT_RGB: [number, number, number] = [245, 158, 11]; // amber

/** Fixed color scale: 0 neutral, 1 accent, linear so 0.5 is the midpoint. */
export function badgeColor(probability: number): string {
  const t = Math.min(1, Math.max(0, probability));
  const mix = NEUTRAL_RGB.map((c, i) => Math.round(c + t * (ACCENT_RGB[i] - c)));
  return `rgb(${mix[0]}, ${mix[1]}, ${mix[2]})`;
}

function sentenceRow(doc: Document, score: SentenceScore): HTMLElement {
  const row = doc.createElement("div");
  row.className = "sentence";

  const badge = doc.createElement("span");
  badge.className = "badge";
  badge.style.backgroundColor = badgeColor(score.probability);
  badge.textContent = score.probability.toFixed(2);
  row.appendChild(badge);

  const text = doc.createElement("span");
  text.className = "text";
  text.textContent = score.text;
  row.appendChild(text);

  for (const device of score.fired_devices) {
    const chip = doc.createElement("span");
    chip.className = "chip";
    chip.textContent = device.feature_name;
    chip.title = `value ${device.value}`;
    row.appendChild(chip);
  }
  return row;
}

export function renderSentences(container: HTMLElement, state: DraftState): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const score of state.sentences) {
    container.appendChild(sentenceRow(doc, score));
  }
}

export function renderErrorBanner(banner: HTMLElement, state: DraftState): void {
  banner.hidden = state.status !== "error";
  banner.textContent =
    state.status === "error"
      ? "Scoring service unreachable; showing the last successful result."
      : "";
}

export function renderImportance(panel: HTMLElement, entries: ImportanceEntry[]): void {
  const doc = panel.ownerDocument;
  panel.replaceChildren();
  const maxWeight = entries.length ? entries[0].weight : 1;
  for (const entry of entries) {
    const row = doc.createElement("div");
    row.className = "importance-row";
    const bar = doc.createElement("span");
    bar.className = "bar";
    bar.style.width = `${Math.round((entry.weight / maxWeight) * 100)}%`;
    const label = doc.createElement("span");
    label.className = "label";
    label.textContent = `${entry.feature_name} (${entry.weight.toFixed(3)})`;
    row.appendChild(bar);
    row.appendChild(label);
    panel.appendChild(row);
  }
}
