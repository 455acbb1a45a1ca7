/** Minimal SVG assembly: tags, escaping, and path strings. */

export type Attrs = Record<string, string | number>;

export function escapeText(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

function attrString(attrs: Attrs): string {
  return Object.entries(attrs)
    .map(([key, value]) => ` ${key}="${escapeText(String(value))}"`)
    .join("");
}

export function tag(name: string, attrs: Attrs, children = ""): string {
  if (children === "") {
    return `<${name}${attrString(attrs)}/>`;
  }
  return `<${name}${attrString(attrs)}>${children}</${name}>`;
}

export function text(content: string, attrs: Attrs): string {
  return tag("text", attrs, escapeText(content));
}

const round = (v: number) => Math.round(v * 100) / 100;

/** Polyline path through the given points. */
export function linePath(points: Array<[number, number]>): string {
  return points
    .map(([x, y], i) => `${i === 0 ? "M" : "L"}${round(x)} ${round(y)}`)
    .join("");
}

/** Closed band: forward along the top edge, back along the bottom. */
export function bandPath(
  top: Array<[number, number]>,
  bottom: Array<[number, number]>,
): string {
  const back = [...bottom].reverse();
  return `${linePath(top)}${back
    .map(([x, y]) => `L${round(x)} ${round(y)}`)
    .join("")}Z`;
}
