import type { RankRequest, RankResponse, Schema } from "./types.js";

export interface Tab {
  id: string;
  label: string;
  /** focus categories sent to the server; null means no focus (everything) */
  focus: string[] | null;
}

/** Known categories, most abstract first; unknown ones append after. */
const CATEGORY_ORDER = ["aggregate", "major_area", "area", "sub_area", "career", "tool"];

export function tabsFromCategories(categories: string[]): Tab[] {
  const cats = [...new Set(categories)].filter((c) => c !== "base");
  cats.sort((a, b) => {
    const ia = CATEGORY_ORDER.indexOf(a);
    const ib = CATEGORY_ORDER.indexOf(b);
    return (ia < 0 ? CATEGORY_ORDER.length : ia) - (ib < 0 ? CATEGORY_ORDER.length : ib)
      || a.localeCompare(b);
  });
  const tabs: Tab[] = [{ id: "all", label: "Everything", focus: null }];
  for (const c of cats) tabs.push({ id: c, label: c, focus: [c] });
  tabs.push({ id: "base", label: "projects", focus: ["base"] });
  for (const c of cats) {
    tabs.push({ id: `inverse:${c}`, label: `inverse ${c}`, focus: [`inverse:${c}`] });
  }
  return tabs;
}

/** Client-side survey/session state. The server stays the only source of
 * scores: this class only accumulates answers and remembers the last
 * server-provided list untouched. */
export class SessionState {
  readonly answers = new Map<string, string>();
  alpha: number | null = null;
  activeTab: Tab = { id: "all", label: "Everything", focus: null };
  lastRanked: RankResponse | null = null;
  userCoords: number[] | null = null;

  constructor(readonly schema: Schema) {}

  setAnswer(questionId: string, option: string): void {
    const q = this.schema.questions.find((qq) => qq.id === questionId);
    if (!q) throw new Error(`unknown question ${questionId}`);
    if (!q.options.includes(option)) {
      throw new Error(`unknown option ${option} for ${questionId}`);
    }
    this.answers.set(questionId, option);
  }

  clearAnswer(questionId: string): void {
    this.answers.delete(questionId);
  }

  get answeredCount(): number {
    return this.answers.size;
  }

  get complete(): boolean {
    return this.answers.size === this.schema.questions.length;
  }

  /** Request body for the current state; unanswered questions are simply
   * absent (the server ranks over answered questions only). */
  buildRankRequest(): RankRequest {
    const answers: Record<string, string> = {};
    for (const q of this.schema.questions) {
      const a = this.answers.get(q.id);
      if (a !== undefined) answers[q.id] = a;
    }
    const req: RankRequest = { answers };
    if (this.alpha !== null) req.alpha = this.alpha;
    if (this.activeTab.focus !== null) req.focus = this.activeTab.focus;
    return req;
  }

  applyRankResponse(res: RankResponse): void {
    this.lastRanked = res;
  }

  applyPlacement(coords: number[]): void {
    this.userCoords = coords;
  }
}
