/**
 * The paged table grid. Column order comes straight from the table
 * metadata — each margin-of-error column renders immediately right of its
 * estimate — and wide tables (up to 526 pairs, 1052 data columns) are
 * windowed horizontally by whole pairs so the adjacency is never split
 * or reordered.
 */

import type { ColumnInfo, TableInfo } from "./api.js";

export interface ColumnPair {
  estimateId: string;
  moeId: string;
  displayName: string;
}

/** Column pairs in line order (the dictionary keys are zero-padded lines). */
export function columnPairs(table: TableInfo): ColumnPair[] {
  const lines = Object.keys(table.columns).sort();
  return lines.map(line => {
    const column = table.columns[line] as ColumnInfo;
    return {
      estimateId: column.column_id,
      moeId: column.moe_column_id,
      displayName: column.display_name,
    };
  });
}

/**
 * Check a flat data header (as served in row objects or CSV) for strict
 * estimate/MOE adjacency and fold it into pairs. Throws on any violation —
 * the UI must render the service's order, never repair it.
 */
export function parseDataHeader(header: readonly string[]): ColumnPair[] {
  if (header.length % 2 !== 0) {
    throw new Error(`data header has odd width ${header.length}`);
  }
  const pairs: ColumnPair[] = [];
  for (let i = 0; i < header.length; i += 2) {
    const estimateId = header[i] as string;
    const moeId = header[i + 1] as string;
    if (estimateId.endsWith("_moe") || moeId !== `${estimateId}_moe`) {
      throw new Error(
        `columns ${i} and ${i + 1} are not an estimate/MOE pair: ` +
          `${estimateId}, ${moeId}`,
      );
    }
    pairs.push({ estimateId, moeId, displayName: estimateId });
  }
  return pairs;
}

export interface GridWindow {
  /** Index of the first visible pair. */
  offset: number;
  pairs: ColumnPair[];
  totalPairs: number;
}

/** A horizontal slice of whole pairs; the offset is clamped into range. */
export function windowPairs(pairs: ColumnPair[], offset: number, width: number): GridWindow {
  const clamped = Math.max(0, Math.min(offset, Math.max(0, pairs.length - width)));
  return {
    offset: clamped,
    pairs: pairs.slice(clamped, clamped + width),
    totalPairs: pairs.length,
  };
}

export const GEO_FIELDS = ["name", "geoid", "stusab", "sumlevel"] as const;

/**
 * Render rows into a table element. Cell text is the raw field from the
 * API (jammed cells arrive as empty strings and stay empty). Estimate
 * header cells carry data-column for the stats panel to hook into.
 */
export function renderGrid(
  doc: Document,
  window: GridWindow,
  rows: Record<string, string>[],
): HTMLTableElement {
  const table = doc.createElement("table");
  table.className = "data-grid";

  const thead = doc.createElement("thead");
  const headRow = doc.createElement("tr");
  for (const field of GEO_FIELDS) {
    const th = doc.createElement("th");
    th.className = "geo";
    th.textContent = field;
    headRow.appendChild(th);
  }
  for (const pair of window.pairs) {
    const est = doc.createElement("th");
    est.className = "estimate";
    est.dataset.column = pair.estimateId;
    est.title = pair.displayName;
    est.textContent = pair.estimateId;
    headRow.appendChild(est);

    const moe = doc.createElement("th");
    moe.className = "moe";
    moe.textContent = pair.moeId;
    headRow.appendChild(moe);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = doc.createElement("tbody");
  for (const row of rows) {
    const tr = doc.createElement("tr");
    for (const field of GEO_FIELDS) {
      const td = doc.createElement("td");
      td.className = "geo";
      td.textContent = row[field] ?? "";
      tr.appendChild(td);
    }
    for (const pair of window.pairs) {
      const est = doc.createElement("td");
      est.className = "estimate";
      est.dataset.column = pair.estimateId;
      est.textContent = row[pair.estimateId] ?? "";
      tr.appendChild(est);

      const moe = doc.createElement("td");
      moe.className = "moe";
      moe.textContent = row[pair.moeId] ?? "";
      tr.appendChild(moe);
    }
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  return table;
}
