import { ScoringApi } from "./api";
import { ScoringController } from "./controller";
import { renderErrorBanner, renderImportance, renderSentences } from "./render";
import { DraftStore } from "./state";

const DRAFT_KEY = "ovation.draft";

function apiBase(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("api");
  return (fromQuery ?? "http://127.0.0.1:8000").replace(/\/$/, "");
}

function start(): void {
  const editor = document.getElementById("editor") as HTMLTextAreaElement;
  const results = document.getElementById("results") as HTMLElement;
  const banner = document.getElementById("error-banner") as HTMLElement;
  const panel = document.getElementById("importance-panel") as HTMLElement;

  const api = new ScoringApi(apiBase());
  const store = new DraftStore();
  const controller = new ScoringController(api, store);

  store.subscribe((state) => {
    renderSentences(results, state);
    renderErrorBanner(banner, state);
  });

  editor.addEventListener("input", () => {
    // only the draft text persists; everything else rebuilds from responses
    window.localStorage.setItem(DRAFT_KEY, editor.value);
    controller.onEdit(editor.value);
  });

  api
    .importance()
    .then((response) => renderImportance(panel, response.importance))
    .catch(() => {
      panel.textContent = "Importance ranking unavailable.";
    });

  const saved = window.localStorage.getItem(DRAFT_KEY);
  if (saved) {
    editor.value = saved;
    store.edit(saved);
    void controller.scoreNow();
  }
}

document.addEventListener("DOMContentLoaded", start);
