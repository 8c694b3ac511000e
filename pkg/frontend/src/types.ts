export interface FiredDevice {
  feature_name: string;
  value: number;
}

export interface SentenceScore {
  text: string;
  probability: number;
  fired_devices: FiredDevice[];
}

export interface ScoreResponse {
  sentences: SentenceScore[];
}

export interface ImportanceEntry {
  feature_name: string;
  weight: number;
}

export interface ImportanceResponse {
  importance: ImportanceEntry[];
}

export type RequestStatus = "idle" | "pending" | "error";

export interface DraftState {
  draft: string;
  /** bumps on every edit; responses carry the revision they were sent for */
  revision: number;
  /** revision of the annotations currently shown */
  scoredRevision: number;
  sentences: SentenceScore[];
  status: RequestStatus;
}
