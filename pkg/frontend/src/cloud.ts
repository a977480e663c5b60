import type { EmbeddingDoc, EmbeddingPoint, SymbolInfo } from "./types.js";

export interface ViewBox {
  width: number;
  height: number;
  pad: number;
}

export interface Transform {
  toPixel(coords: number[]): [number, number];
}

/** Isotropic map from embedding coordinates to pixels: both axes share one
 * scale so distances on screen stay proportional to embedded distances. */
export function makeTransform(points: EmbeddingPoint[], box: ViewBox): Transform {
  let minX = Infinity,
    maxX = -Infinity,
    minY = Infinity,
    maxY = -Infinity;
  for (const p of points) {
    minX = Math.min(minX, p.coords[0]);
    maxX = Math.max(maxX, p.coords[0]);
    minY = Math.min(minY, p.coords[1]);
    maxY = Math.max(maxY, p.coords[1]);
  }
  const spanX = maxX - minX || 1;
  const spanY = maxY - minY || 1;
  const scale = Math.min(
    (box.width - 2 * box.pad) / spanX,
    (box.height - 2 * box.pad) / spanY,
  );
  const cx = (minX + maxX) / 2;
  const cy = (minY + maxY) / 2;
  return {
    toPixel(coords: number[]): [number, number] {
      return [
        box.width / 2 + (coords[0] - cx) * scale,
        // screen y grows downward
        box.height / 2 - (coords[1] - cy) * scale,
      ];
    },
  };
}

export interface Bubble {
  id: string;
  kind: EmbeddingPoint["kind"];
  x: number;
  y: number;
  r: number;
  highlighted: boolean;
}

export const KIND_COLORS: Record<EmbeddingPoint["kind"], string> = {
  base: "#4a90d9",
  meta: "#d97b4a",
  inverse: "#9b59b6",
  user: "#2ecc71",
};

/** Bubble radius grows with the square root of the history weight so the
 * bubble area tracks the event count. */
export function bubbleRadius(weight: number, maxWeight: number, maxR = 18, minR = 3): number {
  if (maxWeight <= 0) return minR;
  return minR + (maxR - minR) * Math.sqrt(Math.max(weight, 0) / maxWeight);
}

export interface CloudOptions {
  showInverse: boolean;
  /** flattened members of the hovered meta-symbol, highlighted in place */
  highlight: Set<string>;
}

export function bubbles(
  doc: EmbeddingDoc,
  box: ViewBox,
  opts: CloudOptions = { showInverse: false, highlight: new Set() },
): Bubble[] {
  const visible = doc.points.filter((p) => opts.showInverse || p.kind !== "inverse");
  const t = makeTransform(visible, box);
  const maxWeight = Math.max(...visible.map((p) => p.weight));
  return visible.map((p) => {
    const [x, y] = t.toPixel(p.coords);
    return {
      id: p.id,
      kind: p.kind,
      x,
      y,
      r: p.kind === "user" ? 6 : bubbleRadius(p.weight, maxWeight),
      highlighted: opts.highlight.has(p.id),
    };
  });
}

/** Base symbols lit up when hovering a meta-symbol. */
export function highlightSetFor(symbol: SymbolInfo | undefined): Set<string> {
  return new Set(symbol?.members ?? []);
}
