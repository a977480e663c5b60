/** Shapes of the JSON documents served by the recommender HTTP API. */

export interface Question {
  id: string;
  text: string;
  options: string[];
}

export interface Schema {
  format_version: number;
  questions: Question[];
}

export interface SymbolInfo {
  id: string;
  name: string;
  category: string;
  weight: number;
  /** flattened base symbols; present on meta-symbols only */
  members?: string[];
}

export interface RankEntry {
  id: string;
  log_score: number;
  category: string;
}

export interface RankResponse {
  alpha: number;
  focus: string[] | null;
  entries: RankEntry[];
}

export interface RankRequest {
  answers: Record<string, string>;
  alpha?: number;
  focus?: string[];
  limit?: number;
}

export interface EmbeddingPoint {
  id: string;
  kind: "base" | "meta" | "inverse" | "user";
  weight: number;
  coords: number[];
}

export interface EmbeddingDoc {
  format_version: number;
  dim: number;
  stress: number;
  iterations_used: number;
  points: EmbeddingPoint[];
}

export interface PlaceResponse {
  coords: number[];
  nearest: { id: string; kind: string; distance: number }[];
}

export interface SymbolMetrics {
  id: string;
  category: string;
  total_signal: number;
  snr: number;
  snr_is_upper_bound: boolean;
  relative_signal: number;
  history_events: number;
  member_count: number;
}

export interface ApiError {
  error_code: string;
  message: string;
  detail: unknown;
}

export function isApiError(x: unknown): x is ApiError {
  return (
    typeof x === "object" &&
    x !== null &&
    typeof (x as ApiError).error_code === "string" &&
    typeof (x as ApiError).message === "string"
  );
}
