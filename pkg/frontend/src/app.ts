import { ApiClient, ApiRequestError } from "./api.js";
import { bubbles, highlightSetFor, KIND_COLORS } from "./cloud.js";
import { LatestWins } from "./debounce.js";
import { displayRows } from "./ranking.js";
import { SessionState, tabsFromCategories, type Tab } from "./session.js";
import type {
  EmbeddingDoc,
  PlaceResponse,
  RankRequest,
  RankResponse,
} from "./types.js";

const BOX = { width: 640, height: 480, pad: 24 };

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text !== undefined) node.textContent = text;
  return node;
}

export async function boot(root: HTMLElement, baseUrl = ""): Promise<void> {
  const api = new ApiClient(baseUrl);
  const schema = await api.schema();
  const symbols = await api.symbols();
  const symbolById = new Map(symbols.map((s) => [s.id, s]));
  const embedding = await api.embedding(2);
  const session = new SessionState(schema);
  const tabs = tabsFromCategories(symbols.map((s) => s.category));

  const errorBar = el("div", { class: "error", hidden: "" });
  const surveyPane = el("div", { class: "survey" });
  const tabBar = el("div", { class: "tabs" });
  const rankPane = el("ol", { class: "ranking" });
  const cloudPane = document.createElementNS("http://www.w3.org/2000/svg", "svg");
  cloudPane.setAttribute("viewBox", `0 0 ${BOX.width} ${BOX.height}`);
  cloudPane.setAttribute("width", String(BOX.width));
  const alphaInput = el("input", {
    type: "range", min: "0", max: "1", step: "0.05", value: "0.25",
  });
  const inverseToggle = el("input", { type: "checkbox" });
  root.append(errorBar, surveyPane, alphaInput, tabBar, rankPane, inverseToggle, cloudPane);

  let showInverse = false;
  let highlight = new Set<string>();

  const showError = (err: unknown) => {
    errorBar.hidden = false;
    errorBar.textContent =
      err instanceof ApiRequestError
        ? `${err.error.error_code}: ${err.error.message}`
        : String(err);
  };

  const renderRanking = (res: RankResponse) => {
    errorBar.hidden = true;
    rankPane.replaceChildren(
      ...displayRows(res).map((row) => {
        const li = el("li", { class: "entry" });
        li.append(
          el("span", { class: "bar", style: `width:${(row.bar * 100).toFixed(1)}%` }),
          el("span", { class: "id" }, symbolById.get(row.id)?.name ?? row.id),
          el("span", { class: "score" }, row.logScore.toFixed(3)),
        );
        return li;
      }),
    );
  };

  const renderCloud = (marker: number[] | null) => {
    const doc: EmbeddingDoc = marker
      ? {
          ...embedding,
          points: [
            ...embedding.points,
            { id: "you", kind: "user", weight: 1, coords: marker },
          ],
        }
      : embedding;
    cloudPane.replaceChildren(
      ...bubbles(doc, BOX, { showInverse, highlight }).map((b) => {
        const c = document.createElementNS("http://www.w3.org/2000/svg", "circle");
        c.setAttribute("cx", b.x.toFixed(2));
        c.setAttribute("cy", b.y.toFixed(2));
        c.setAttribute("r", b.r.toFixed(2));
        c.setAttribute("fill", KIND_COLORS[b.kind]);
        c.setAttribute("opacity", b.highlighted ? "1" : "0.55");
        c.addEventListener("mouseenter", () => {
          highlight = highlightSetFor(symbolById.get(b.id));
          renderCloud(session.userCoords);
        });
        const title = document.createElementNS("http://www.w3.org/2000/svg", "title");
        title.textContent = `${b.id} (${b.kind})`;
        c.append(title);
        return c;
      }),
    );
  };

  const ranker = new LatestWins<RankRequest, RankResponse>(
    (req) => api.rank(req),
    (res) => {
      session.applyRankResponse(res);
      renderRanking(res);
    },
    showError,
  );
  const placer = new LatestWins<Record<string, string>, PlaceResponse>(
    (answers) => api.place(answers),
    (res) => {
      session.applyPlacement(res.coords);
      renderCloud(res.coords);
    },
    () => {}, // placement needs a full survey; stay quiet until then
  );

  const refresh = () => {
    if (session.answeredCount === 0) return;
    ranker.submit(session.buildRankRequest());
    if (session.complete) {
      placer.submit(session.buildRankRequest().answers);
    }
  };

  for (const q of schema.questions) {
    const fs = el("fieldset");
    fs.append(el("legend", {}, q.text));
    for (const opt of q.options) {
      const label = el("label");
      const radio = el("input", { type: "radio", name: q.id, value: opt });
      radio.addEventListener("change", () => {
        session.setAnswer(q.id, opt);
        refresh();
      });
      label.append(radio, document.createTextNode(opt));
      fs.append(label);
    }
    surveyPane.append(fs);
  }

  alphaInput.addEventListener("change", () => {
    session.alpha = Number(alphaInput.value);
    refresh();
  });
  inverseToggle.addEventListener("change", () => {
    showInverse = inverseToggle.checked;
    renderCloud(session.userCoords);
  });

  const renderTabs = () => {
    tabBar.replaceChildren(
      ...tabs.map((t: Tab) => {
        const b = el(
          "button",
          { class: t.id === session.activeTab.id ? "tab active" : "tab" },
          t.label,
        );
        b.addEventListener("click", () => {
          session.activeTab = t;
          renderTabs();
          refresh();
        });
        return b;
      }),
    );
  };

  renderTabs();
  renderCloud(null);
}

declare global {
  interface Window {
    symbolrecBoot: typeof boot;
  }
}
if (typeof window !== "undefined") {
  window.symbolrecBoot = boot;
}
