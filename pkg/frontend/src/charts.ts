// Hand-rolled SVG chart builders (no chart library: the views are
// small and the workbench must run offline). All builders return an
// <svg> element ready to insert.

import type { GroupedTable, TopicMapData } from "./types.js";

const SVG_NS = "http://www.w3.org/2000/svg";

const PALETTE = [
  "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
  "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
  "#98df8a", "#ff9896", "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7",
  "#dbdb8d", "#9edae5",
];

export function topicColor(topic: number): string {
  return PALETTE[topic % PALETTE.length];
}

function el<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, String(v));
  return node;
}

function text(content: string, attrs: Record<string, string | number>): SVGTextElement {
  const node = el("text", attrs);
  node.textContent = content;
  return node;
}

/** Topic map: 2D scatter with circles scaled by topic share. */
export function topicMapChart(
  map: TopicMapData,
  selected: number | null,
  onSelect: (topic: number) => void,
  size = 420,
): SVGSVGElement {
  const svg = el("svg", {
    width: size, height: size, viewBox: `0 0 ${size} ${size}`, role: "img",
  });
  svg.classList.add("topic-map");
  const xs = map.coords_2d.map((c) => c[0]);
  const ys = map.coords_2d.map((c) => c[1]);
  const span = Math.max(
    Math.max(...xs) - Math.min(...xs),
    Math.max(...ys) - Math.min(...ys),
    1e-9,
  );
  const pad = 50;
  const scale = (size - 2 * pad) / span;
  const x0 = Math.min(...xs);
  const y0 = Math.min(...ys);
  map.coords_2d.forEach((coord, t) => {
    const cx = pad + (coord[0] - x0) * scale;
    const cy = size - pad - (coord[1] - y0) * scale;
    const r = 8 + 60 * Math.sqrt(map.topic_share[t]);
    const circle = el("circle", {
      cx, cy, r,
      fill: topicColor(t),
      "fill-opacity": selected === null || selected === t ? 0.75 : 0.25,
      stroke: selected === t ? "#111" : "none",
      "stroke-width": 2,
    });
    circle.classList.add("topic-circle");
    circle.addEventListener("click", () => onSelect(t));
    svg.appendChild(circle);
    svg.appendChild(text(String(t + 1), {
      x: cx, y: cy + 4, "text-anchor": "middle", "font-size": 12, fill: "#111",
    }));
  });
  return svg;
}

/** Grouped topic distributions as stacked bars (one bar per group). */
export function groupedStackChart(
  table: GroupedTable,
  groupOrder: string[] | null = null,
  width = 560,
  height = 300,
): SVGSVGElement {
  const svg = el("svg", { width, height, viewBox: `0 0 ${width} ${height}` });
  svg.classList.add("grouped-chart");
  const groups = groupOrder
    ? groupOrder.filter((g) => g in table.rows)
    : Object.keys(table.rows).sort();
  const pad = 40;
  const barWidth = Math.min(80, (width - 2 * pad) / Math.max(groups.length, 1) - 16);
  groups.forEach((group, gi) => {
    const row = table.rows[group];
    const x = pad + gi * ((width - 2 * pad) / groups.length) + 8;
    let y = height - pad;
    row.forEach((share, t) => {
      const h = share * (height - 2 * pad);
      y -= h;
      const rect = el("rect", {
        x, y, width: barWidth, height: Math.max(h, 0),
        fill: topicColor(t), "fill-opacity": 0.9,
      });
      const title = el("title");
      title.textContent = `topic ${t + 1}: ${(share * 100).toFixed(2)}% of ${group}`;
      rect.appendChild(title);
      svg.appendChild(rect);
    });
    svg.appendChild(text(group, {
      x: x + barWidth / 2, y: height - pad + 16,
      "text-anchor": "middle", "font-size": 11,
    }));
    svg.appendChild(text(`n=${table.doc_counts[group]}`, {
      x: x + barWidth / 2, y: height - pad + 30,
      "text-anchor": "middle", "font-size": 10, fill: "#666",
    }));
  });
  return svg;
}

/** Period/fifth histogram: P-Pre fifths, the P-Ret column, P-Post fifths. */
export function fifthHistogram(
  fifths: { P_PRE: Record<string, number>; P_RET: number; P_POST: Record<string, number> },
  width = 680,
  height = 260,
): SVGSVGElement {
  const svg = el("svg", { width, height, viewBox: `0 0 ${width} ${height}` });
  svg.classList.add("fifth-chart");
  const labels = Object.keys(fifths.P_PRE);
  const columns: Array<{ label: string; value: number; color: string }> = [
    ...labels.map((l) => ({ label: `pre ${l}`, value: fifths.P_PRE[l], color: "#1f77b4" })),
    { label: "retraction year", value: fifths.P_RET, color: "#d62728" },
    ...labels.map((l) => ({ label: `post ${l}`, value: fifths.P_POST[l], color: "#2ca02c" })),
  ];
  const pad = 36;
  const max = Math.max(...columns.map((c) => c.value), 1);
  const slot = (width - 2 * pad) / columns.length;
  columns.forEach((col, i) => {
    const h = (col.value / max) * (height - 2 * pad - 20);
    const x = pad + i * slot + 3;
    svg.appendChild(el("rect", {
      x, y: height - pad - h, width: slot - 6, height: h, fill: col.color,
      "fill-opacity": 0.85,
    }));
    svg.appendChild(text(String(col.value), {
      x: x + (slot - 6) / 2, y: height - pad - h - 4,
      "text-anchor": "middle", "font-size": 10,
    }));
    const label = text(col.label, {
      x: x + (slot - 6) / 2, y: height - pad + 10,
      "text-anchor": "end", "font-size": 8.5,
      transform: `rotate(-35 ${x + (slot - 6) / 2} ${height - pad + 10})`,
    });
    svg.appendChild(label);
  });
  return svg;
}
