/** Minimal SVG assembly: escaped elements, stable number formatting. */

export type Attributes = Record<string, string | number>;

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

/** Fixed-precision coordinate formatting keeps re-renders byte-identical. */
export function fmt(value: number): string {
  const rounded = Number(value.toFixed(2));
  return Object.is(rounded, -0) ? "0" : String(rounded);
}

export function el(tag: string, attrs: Attributes, content = ""): string {
  const parts = Object.entries(attrs)
    .map(([key, value]) => `${key}="${escapeXml(String(value))}"`)
    .join(" ");
  const open = parts.length > 0 ? `<${tag} ${parts}` : `<${tag}`;
  return content === "" ? `${open}/>` : `${open}>${content}</${tag}>`;
}

export function polyline(points: Array<[number, number]>, attrs: Attributes): string {
  const path = points.map(([x, y]) => `${fmt(x)},${fmt(y)}`).join(" ");
  return el("polyline", { points: path, fill: "none", ...attrs });
}

export function svgDocument(width: number, height: number, body: string[]): string {
  return [
    `<svg xmlns="http://www.w3.org/2000/svg" width="${width}" height="${height}" ` +
      `viewBox="0 0 ${width} ${height}">`,
    ...body,
    "</svg>",
    "",
  ].join("\n");
}

/** Embed a JSON payload as the figure's machine-readable metadata. */
export function metadataElement(payload: unknown): string {
  return el("metadata", { id: "figure-metadata" }, escapeXml(JSON.stringify(payload)));
}

/** Recover the payload written by metadataElement from a rendered SVG. */
export function readMetadata(svg: string): unknown {
  const match = svg.match(/<metadata id="figure-metadata">(.*?)<\/metadata>/s);
  if (match === null) {
    throw new Error("no figure-metadata element in the SVG");
  }
  const unescaped = match[1]
    .replace(/&lt;/g, "<")
    .replace(/&gt;/g, ">")
    .replace(/&quot;/g, '"')
    .replace(/&amp;/g, "&");
  return JSON.parse(unescaped);
}
