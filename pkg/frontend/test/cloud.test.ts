import { describe, expect, it } from "vitest";

import {
  bubbleRadius,
  bubbles,
  highlightSetFor,
  makeTransform,
} from "../src/cloud.js";
import type { EmbeddingDoc, EmbeddingPoint, SymbolInfo } from "../src/types.js";

import embeddingFixture from "./fixtures/embedding.json";

const embedding = embeddingFixture as EmbeddingDoc;
const BOX = { width: 640, height: 480, pad: 24 };

describe("makeTransform", () => {
  const points: EmbeddingPoint[] = [
    { id: "a", kind: "base", weight: 1, coords: [-1, -1] },
    { id: "b", kind: "base", weight: 1, coords: [1, 1] },
    { id: "c", kind: "base", weight: 1, coords: [0, 0] },
  ];

  it("keeps pixel distances proportional to embedded distances", () => {
    const t = makeTransform(points, BOX);
    const [ax, ay] = t.toPixel([-1, -1]);
    const [bx, by] = t.toPixel([1, 1]);
    const [cx, cy] = t.toPixel([0, 0]);
    const ab = Math.hypot(bx - ax, by - ay);
    const ac = Math.hypot(cx - ax, cy - ay);
    expect(ab / ac).toBeCloseTo(2, 12);
  });

  it("flips the y axis so larger y draws higher on screen", () => {
    const t = makeTransform(points, BOX);
    const [, lowY] = t.toPixel([0, -1]);
    const [, highY] = t.toPixel([0, 1]);
    expect(highY).toBeLessThan(lowY);
  });

  it("keeps every fixture point inside the padded box", () => {
    const t = makeTransform(embedding.points, BOX);
    for (const p of embedding.points) {
      const [x, y] = t.toPixel(p.coords);
      expect(x).toBeGreaterThanOrEqual(BOX.pad - 1e-9);
      expect(x).toBeLessThanOrEqual(BOX.width - BOX.pad + 1e-9);
      expect(y).toBeGreaterThanOrEqual(BOX.pad - 1e-9);
      expect(y).toBeLessThanOrEqual(BOX.height - BOX.pad + 1e-9);
    }
  });
});

describe("bubbleRadius", () => {
  it("scales area with weight", () => {
    const r1 = bubbleRadius(25, 100);
    const r2 = bubbleRadius(100, 100);
    // sqrt scaling: quadrupling the weight doubles the radius growth
    expect((r2 - 3) / (r1 - 3)).toBeCloseTo(2, 12);
  });

  it("clamps to the configured bounds", () => {
    expect(bubbleRadius(0, 100)).toBe(3);
    expect(bubbleRadius(100, 100)).toBe(18);
    expect(bubbleRadius(5, 0)).toBe(3);
  });
});

describe("bubbles", () => {
  it("hides inverse points unless asked for", () => {
    const shown = bubbles(embedding, BOX);
    expect(shown.some((b) => b.kind === "inverse")).toBe(false);
    const withInverse = bubbles(embedding, BOX, {
      showInverse: true,
      highlight: new Set(),
    });
    expect(withInverse.some((b) => b.kind === "inverse")).toBe(
      embedding.points.some((p) => p.kind === "inverse"),
    );
  });

  it("marks exactly the highlighted ids", () => {
    const base = embedding.points.filter((p) => p.kind === "base").slice(0, 3);
    const highlight = new Set(base.map((p) => p.id));
    const marked = bubbles(embedding, BOX, { showInverse: false, highlight })
      .filter((b) => b.highlighted)
      .map((b) => b.id)
      .sort();
    expect(marked).toEqual([...highlight].sort());
  });
});

describe("highlightSetFor", () => {
  it("returns the flattened members of a meta-symbol", () => {
    const sym: SymbolInfo = {
      id: "area:0",
      name: "area 0",
      category: "area",
      weight: 10,
      members: ["S1", "S2"],
    };
    expect(highlightSetFor(sym)).toEqual(new Set(["S1", "S2"]));
  });

  it("is empty for base symbols and unknown ids", () => {
    expect(highlightSetFor(undefined).size).toBe(0);
    expect(
      highlightSetFor({ id: "S1", name: "S1", category: "base", weight: 1 }).size,
    ).toBe(0);
  });
});
