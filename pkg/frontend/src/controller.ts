import { ScoringApi } from "./api";
import { Debouncer } from "./debounce";
import { DraftStore } from "./state";

export const DEBOUNCE_MS = 500;

/**
 * Edit-to-score loop: every edit bumps the revision and (after a debounce)
 * re-scores the whole draft. One request is in flight at a time in
 * practice; if a newer edit superseded the request while it flew, the
 * store drops the response on arrival.
 */
export class ScoringController {
  private readonly debouncer: Debouncer;

  constructor(
    private readonly api: ScoringApi,
    readonly store: DraftStore,
    debounceMs: number = DEBOUNCE_MS,
  ) {
    this.debouncer = new Debouncer(debounceMs);
  }

  onEdit(draft: string): void {
    const revision = this.store.edit(draft);
    if (draft.trim() === "") {
      // an empty draft has no sentences; skip the round trip
      this.debouncer.cancel();
      this.store.applyResponse(revision, { sentences: [] });
      return;
    }
    this.debouncer.schedule(() => void this.send());
  }

  /** Score the current draft immediately (used on startup restore). */
  scoreNow(): Promise<void> {
    this.debouncer.cancel();
    return this.send();
  }

  private async send(): Promise<void> {
    const revision = this.store.current.revision;
    const draft = this.store.current.draft;
    try {
      const response = await this.api.score(draft);
      this.store.applyResponse(revision, response);
    } catch {
      this.store.applyError(revision);
    }
  }
}
