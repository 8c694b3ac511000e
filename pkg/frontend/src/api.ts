import type { ImportanceResponse, ScoreResponse } from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin client for the scoring service; fetch is injectable for tests. */
export class ScoringApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  async score(text: string): Promise<ScoreResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/score`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ text }),
    });
    if (!response.ok) {
      throw new Error(`score request failed: HTTP ${response.status}`);
    }
    return (await response.json()) as ScoreResponse;
  }

  async importance(): Promise<ImportanceResponse> {
    const response = await this.fetchImpl(`${this.baseUrl}/model/importance`);
    if (!response.ok) {
      throw new Error(`importance request failed: HTTP ${response.status}`);
    }
    return (await response.json()) as ImportanceResponse;
  }
}
