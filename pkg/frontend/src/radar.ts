import { normalizeAxis } from "./normalize.js";
import type { RadarPayload, RadarSubgroup } from "./types.js";

// Radar view models.  Quality mode shows exactly the three ranked-list
// axes; selector mode swaps quality for up to five attribute axes the
// user picked, keeping size and subgroup mean for orientation.

export interface RadarAxis {
  label: string;
  value: number;
  raw: string;
}

export interface RadarView {
  id: string;
  axes: RadarAxis[];
}

export const QUALITY_AXES = ["quality", "size", "subgroup_mean"] as const;
export const MAX_ATTRIBUTE_AXES = 5;

// Nominal selector labels rendered as fixed levels on the axis.
export const LABEL_LEVELS: Record<string, number> = {
  low: 0.0,
  medium: 0.5,
  high: 1.0,
};

function formatRaw(value: number): string {
  if (Number.isInteger(value)) {
    return String(value);
  }
  return value.toPrecision(5);
}

function pick(payload: RadarPayload, patterns: string[]): RadarSubgroup[] {
  const wanted = new Set(patterns);
  return payload.subgroups.filter((sg) => wanted.has(sg.pattern));
}

export function qualityRadar(payload: RadarPayload, patterns: string[]): RadarView[] {
  return pick(payload, patterns).map((sg) => ({
    id: sg.pattern,
    axes: QUALITY_AXES.map((axis) => ({
      label: axis,
      value: normalizeAxis(sg.axes[axis], payload.ranges[axis]),
      raw: formatRaw(sg.axes[axis]),
    })),
  }));
}

export function selectorRadar(
  payload: RadarPayload,
  patterns: string[],
  attributes: string[],
): RadarView[] {
  if (attributes.length > MAX_ATTRIBUTE_AXES) {
    throw new Error(`at most ${MAX_ATTRIBUTE_AXES} attribute axes`);
  }
  return pick(payload, patterns).map((sg) => {
    const axes: RadarAxis[] = attributes.map((attr) => {
      const label = sg.selectors[attr];
      if (label === undefined) {
        // the pattern places no constraint on this attribute
        return { label: attr, value: 0.5, raw: "any" };
      }
      return { label: attr, value: LABEL_LEVELS[label] ?? 0.5, raw: label };
    });
    axes.push({
      label: "size",
      value: normalizeAxis(sg.axes.size, payload.ranges.size),
      raw: formatRaw(sg.axes.size),
    });
    axes.push({
      label: "subgroup_mean",
      value: normalizeAxis(sg.axes.subgroup_mean, payload.ranges.subgroup_mean),
      raw: formatRaw(sg.axes.subgroup_mean),
    });
    return { id: sg.pattern, axes };
  });
}

// --- SVG rendering ---------------------------------------------------------

const PALETTE = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed", "#0891b2"];

export function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface Point {
  x: number;
  y: number;
}

function vertex(center: number, radius: number, index: number, count: number, t: number): Point {
  const angle = -Math.PI / 2 + (2 * Math.PI * index) / count;
  return {
    x: center + radius * t * Math.cos(angle),
    y: center + radius * t * Math.sin(angle),
  };
}

// Overlaid radar polygons as a standalone SVG string.  Every vertex
// carries a <title> with the axis label and the raw (unnormalized)
// service value, so hovering reveals the real numbers.
export function radarSvg(views: RadarView[], size = 340): string {
  if (views.length === 0) {
    return `<svg xmlns="http://www.w3.org/2000/svg" width="${size}" height="${size}"></svg>`;
  }
  const labels = views[0].axes.map((a) => a.label);
  const count = labels.length;
  const center = size / 2;
  const radius = size / 2 - 58;
  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${size}" height="${size}" viewBox="0 0 ${size} ${size}" role="img">`,
  );
  for (const t of [0.25, 0.5, 0.75, 1.0]) {
    const ring = labels
      .map((_, i) => {
        const p = vertex(center, radius, i, count, t);
        return `${p.x.toFixed(2)},${p.y.toFixed(2)}`;
      })
      .join(" ");
    parts.push(`<polygon points="${ring}" fill="none" stroke="#d4d4d8" stroke-width="1"/>`);
  }
  labels.forEach((label, i) => {
    const tip = vertex(center, radius, i, count, 1);
    const anchor = vertex(center, radius + 16, i, count, 1);
    parts.push(
      `<line x1="${center}" y1="${center}" x2="${tip.x.toFixed(2)}" y2="${tip.y.toFixed(2)}" stroke="#d4d4d8" stroke-width="1"/>`,
    );
    const align = Math.abs(anchor.x - center) < 1 ? "middle" : anchor.x > center ? "start" : "end";
    parts.push(
      `<text class="radar-axis" x="${anchor.x.toFixed(2)}" y="${anchor.y.toFixed(2)}" text-anchor="${align}" dominant-baseline="middle" font-size="11">${escapeXml(label)}</text>`,
    );
  });
  views.forEach((view, vi) => {
    const color = PALETTE[vi % PALETTE.length];
    const points = view.axes
      .map((axis, i) => {
        const p = vertex(center, radius, i, count, axis.value);
        return `${p.x.toFixed(2)},${p.y.toFixed(2)}`;
      })
      .join(" ");
    parts.push(`<g class="radar-series" data-id="${escapeXml(view.id)}">`);
    parts.push(
      `<polygon points="${points}" fill="${color}" fill-opacity="0.15" stroke="${color}" stroke-width="2"/>`,
    );
    view.axes.forEach((axis, i) => {
      const p = vertex(center, radius, i, count, axis.value);
      parts.push(
        `<circle cx="${p.x.toFixed(2)}" cy="${p.y.toFixed(2)}" r="3.5" fill="${color}">` +
          `<title>${escapeXml(`${view.id}\n${axis.label}: ${axis.raw}`)}</title></circle>`,
      );
    });
    parts.push("</g>");
  });
  parts.push("</svg>");
  return parts.join("");
}
