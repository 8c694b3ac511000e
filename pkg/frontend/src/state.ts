import type { DraftState, ScoreResponse } from "./types";

export type { DraftState } from "./types";

/**
 * Holds the draft plus the latest annotations. A response is applied only
 * when its revision still matches the current draft, so a slow response for
 * an old edit can never overwrite annotations for a newer one.
 */
export class DraftStore {
  private state: DraftState = {
    draft: "",
    revision: 0,
    scoredRevision: 0,
    sentences: [],
    status: "idle",
  };
  private listeners: Array<(state: DraftState) => void> = [];

  get current(): DraftState {
    return this.state;
  }

  subscribe(listener: (state: DraftState) => void): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  /** Register an edit; returns the new revision to tag the request with. */
  edit(draft: string): number {
    this.state = { ...this.state, draft, revision: this.state.revision + 1, status: "pending" };
    this.emit();
    return this.state.revision;
  }

  /** Apply a scoring response; stale revisions are discarded. */
  applyResponse(revision: number, response: ScoreResponse): boolean {
    if (revision !== this.state.revision) return false;
    this.state = {
      ...this.state,
      sentences: response.sentences,
      scoredRevision: revision,
      status: "idle",
    };
    this.emit();
    return true;
  }

  /** Mark a failed request; previous annotations are kept. */
  applyError(revision: number): boolean {
    if (revision !== this.state.revision) return false;
    this.state = { ...this.state, status: "error" };
    this.emit();
    return true;
  }
}
