// @vitest-environment happy-dom
import { describe, expect, it } from "vitest";

import { badgeColor, renderErrorBanner, renderImportance, renderSentences } from "../src/render";
import type { DraftState } from "../src/types";

function state(partial: Partial<DraftState>): DraftState {
  return {
    draft: "",
    revision: 1,
    scoredRevision: 1,
    sentences: [],
    status: "idle",
    ...partial,
  };
}

describe("badgeColor", () => {
  it("is neutral at 0 and accent at 1", () => {
    expect(badgeColor(0)).toBe("rgb(229, 231, 235)");
    expect(badgeColor(1)).toBe("rgb(245, 158, 11)");
  });

  it("midpoint 0.5 is the exact blend", () => {
    expect(badgeColor(0.5)).toBe("rgb(237, 195, 123)");
  });

  it("clamps out-of-range values", () => {
    expect(badgeColor(-3)).toBe(badgeColor(0));
    expect(badgeColor(7)).toBe(badgeColor(1));
  });
});

describe("renderSentences", () => {
  it("renders one row per response sentence", () => {
    const container = document.createElement("div");
    renderSentences(
      container,
      state({
        sentences: [
          { text: "One.", probability: 0.2, fired_devices: [] },
          {
            text: "Thank you.",
            probability: 0.9,
            fired_devices: [{ feature_name: "gratitude", value: 1 }],
          },
        ],
      }),
    );
    expect(container.querySelectorAll(".sentence")).toHaveLength(2);
    const chips = container.querySelectorAll(".chip");
    expect(chips).toHaveLength(1);
    expect(chips[0].textContent).toBe("gratitude");
  });

  it("clears previous rows on re-render", () => {
    const container = document.createElement("div");
    renderSentences(
      container,
      state({ sentences: [{ text: "A.", probability: 0.1, fired_devices: [] }] }),
    );
    renderSentences(container, state({ sentences: [] }));
    expect(container.querySelectorAll(".sentence")).toHaveLength(0);
  });
});

describe("renderErrorBanner", () => {
  it("shows only in the error state and keeps results visible", () => {
    const banner = document.createElement("div");
    renderErrorBanner(banner, state({ status: "error" }));
    expect(banner.hidden).toBe(false);
    expect(banner.textContent).toContain("last successful result");
    renderErrorBanner(banner, state({ status: "idle" }));
    expect(banner.hidden).toBe(true);
  });
});

describe("renderImportance", () => {
  it("renders ranked rows with labels", () => {
    const panel = document.createElement("div");
    renderImportance(panel, [
      { feature_name: "gratitude", weight: 0.7 },
      { feature_name: "style_present", weight: 0.3 },
    ]);
    const rows = panel.querySelectorAll(".importance-row");
    expect(rows).toHaveLength(2);
    expect(rows[0].textContent).toContain("gratitude");
  });
});
