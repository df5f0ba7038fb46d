/**
 * Quick-stats panel. The panel renders the /stats response and nothing
 * else: the verbatim payload is attached to the element
 * (data-payload), and every displayed number is a formatting of a field
 * from that payload. No statistic is ever computed in the browser.
 */

import type { StatsPayload } from "./api.js";

/** Integers bare, everything else as JavaScript prints it. */
export function formatValue(value: number): string {
  return String(value);
}

function addRow(doc: Document, body: HTMLElement, label: string, value: string): void {
  const row = doc.createElement("div");
  row.className = "stat";
  const dt = doc.createElement("span");
  dt.className = "stat-label";
  dt.textContent = label;
  const dd = doc.createElement("span");
  dd.className = "stat-value";
  dd.textContent = value;
  row.appendChild(dt);
  row.appendChild(dd);
  body.appendChild(row);
}

export function renderStatsPanel(doc: Document, payload: StatsPayload): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "stats-panel";
  panel.dataset.payload = JSON.stringify(payload);

  const heading = doc.createElement("h3");
  heading.textContent = payload.column;
  panel.appendChild(heading);

  const body = doc.createElement("div");
  body.className = "stats-body";

  const d = payload.descriptive;
  addRow(doc, body, "rows", formatValue(payload.total_rows));
  addRow(doc, body, "count", formatValue(d.count));
  addRow(doc, body, "nulls", formatValue(d.nulls));
  if (d.mean !== null) addRow(doc, body, "mean", formatValue(d.mean));
  if (d.median !== null) addRow(doc, body, "median", formatValue(d.median));
  if (d.stddev !== null) addRow(doc, body, "stddev", formatValue(d.stddev));
  if (d.min !== null) addRow(doc, body, "min", formatValue(d.min));
  if (d.max !== null) addRow(doc, body, "max", formatValue(d.max));

  if (payload.moe) {
    const m = payload.moe;
    addRow(doc, body, "estimate", formatValue(m.estimate));
    addRow(doc, body, "MOE", formatValue(m.moe));
    addRow(doc, body, "SE", m.standard_error.toFixed(2));
    addRow(doc, body, "CV", m.cv_percent === null ? "n/a" : `${m.cv_percent.toFixed(1)}%`);
    addRow(doc, body, "90% CI", `${formatValue(m.ci_low)}–${formatValue(m.ci_high)}`);
  }

  panel.appendChild(body);
  return panel;
}

/** Error state for the panel (e.g. the selected column no longer exists). */
export function renderStatsError(doc: Document, message: string): HTMLElement {
  const panel = doc.createElement("section");
  panel.className = "stats-panel stats-error";
  panel.textContent = message;
  return panel;
}
