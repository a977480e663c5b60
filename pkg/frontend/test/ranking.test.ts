import { describe, expect, it } from "vitest";

import { displayRows, filterByCategories, sameOrder } from "../src/ranking.js";
import type { RankResponse, SymbolMetrics } from "../src/types.js";

import rankAll from "./fixtures/rank_archetype.json";
import rankArea from "./fixtures/rank_archetype_area.json";

const all = rankAll as RankResponse;
const area = rankArea as RankResponse;

describe("displayRows", () => {
  it("preserves the server order exactly", () => {
    const rows = displayRows(all);
    expect(rows.map((r) => r.id)).toEqual(all.entries.map((e) => e.id));
  });

  it("maps scores linearly onto bars in [0.05, 1]", () => {
    const rows = displayRows(all);
    const scores = all.entries.map((e) => e.log_score);
    const lo = Math.min(...scores);
    const hi = Math.max(...scores);
    for (const [i, row] of rows.entries()) {
      const expected = 0.05 + 0.95 * ((scores[i] - lo) / (hi - lo));
      expect(row.bar).toBeCloseTo(expected, 12);
    }
    expect(Math.max(...rows.map((r) => r.bar))).toBe(1);
    expect(Math.min(...rows.map((r) => r.bar))).toBeCloseTo(0.05, 12);
  });

  it("uses a full bar when every score is equal", () => {
    const res: RankResponse = {
      alpha: 0.25,
      focus: null,
      entries: [
        { id: "a", log_score: -2, category: "base" },
        { id: "b", log_score: -2, category: "base" },
      ],
    };
    expect(displayRows(res).map((r) => r.bar)).toEqual([1, 1]);
  });

  it("labels the SNR badge as an upper bound", () => {
    const metrics = new Map<string, SymbolMetrics>([
      [
        all.entries[0].id,
        {
          id: all.entries[0].id,
          category: all.entries[0].category,
          total_signal: 10,
          snr: 3.1623,
          snr_is_upper_bound: true,
          relative_signal: 0.5,
          history_events: 10,
          member_count: 1,
        },
      ],
    ]);
    const rows = displayRows(all, metrics);
    expect(rows[0].snrBadge).toBe("SNR <= 3.2");
    expect(rows[1].snrBadge).toBeUndefined();
  });
});

describe("tab filtering", () => {
  it("client-side category filtering equals the server's focused ranking", () => {
    const filtered = filterByCategories(all.entries, ["area"]);
    expect(sameOrder(filtered, area.entries)).toBe(true);
    for (const [i, e] of filtered.entries()) {
      expect(e.log_score).toBeCloseTo(area.entries[i].log_score, 9);
    }
  });

  it("filtering an unfocused ranking never reorders entries", () => {
    const filtered = filterByCategories(all.entries, ["career"]);
    const positions = filtered.map((e) =>
      all.entries.findIndex((x) => x.id === e.id),
    );
    const sorted = [...positions].sort((a, b) => a - b);
    expect(positions).toEqual(sorted);
  });
});
