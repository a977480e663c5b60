import type { RankEntry, RankResponse, SymbolMetrics } from "./types.js";

export interface DisplayRow {
  id: string;
  category: string;
  logScore: number;
  /** bar length in [0, 1], linear over the visible score range */
  bar: number;
  snrBadge?: string;
}

/** Rows in exactly the order the server returned them; the client never
 * re-sorts. Bars map the score range onto [0.05, 1] so the worst entry
 * still shows a sliver. */
export function displayRows(
  res: RankResponse,
  metricsById: Map<string, SymbolMetrics> = new Map(),
): DisplayRow[] {
  const scores = res.entries.map((e) => e.log_score);
  const lo = Math.min(...scores);
  const hi = Math.max(...scores);
  const span = hi - lo;
  return res.entries.map((e) => {
    const m = metricsById.get(e.id);
    return {
      id: e.id,
      category: e.category,
      logScore: e.log_score,
      bar: span > 0 ? 0.05 + 0.95 * ((e.log_score - lo) / span) : 1,
      // the shot-noise model ignores other noise sources, hence the <=
      snrBadge: m ? `SNR <= ${m.snr.toFixed(1)}` : undefined,
    };
  });
}

/** Client-side category filter, used only to cross-check that a focused
 * server request equals filtering an unfocused one. */
export function filterByCategories(
  entries: RankEntry[],
  categories: string[],
): RankEntry[] {
  const wanted = new Set(categories);
  return entries.filter((e) => wanted.has(e.category));
}

export function sameOrder(a: RankEntry[], b: RankEntry[]): boolean {
  return a.length === b.length && a.every((e, i) => e.id === b[i].id);
}
