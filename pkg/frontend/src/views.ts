import { escapeXml } from "./radar.js";
import type { RunSummary, SessionState, SortColumn, SubgroupRow } from "./types.js";

// HTML fragments rendered from session state.  Pure string builders so
// the flow tests can assert on what the user would see without a DOM.

export const escapeHtml = escapeXml;

export function bannerHtml(state: SessionState): string {
  if (state.banner === null) {
    return "";
  }
  return `<div class="banner" role="alert">${escapeHtml(state.banner)}` +
    `<button type="button" data-action="retry">retry</button></div>`;
}

export function runTableHtml(runs: RunSummary[], selected: string | null): string {
  if (runs.length === 0) {
    return `<p class="empty-state">No runs yet. Configure one below and submit it.</p>`;
  }
  const rows = runs
    .map((run) => {
      const cls = run.run_id === selected ? ` class="selected"` : "";
      const lags = run.lags !== undefined ? run.lags.join(", ") : "";
      const instances = run.instances !== undefined ? String(run.instances) : "";
      const note = run.error !== undefined ? escapeHtml(run.error) : "";
      return (
        `<tr${cls} data-run="${escapeHtml(run.run_id)}">` +
        `<td class="digest">${escapeHtml(run.run_id)}</td>` +
        `<td>${escapeHtml(run.status)}</td>` +
        `<td>${escapeHtml(run.input ?? "")}</td>` +
        `<td>${lags}</td><td>${instances}</td><td>${note}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="runs"><thead><tr>` +
    `<th>run</th><th>status</th><th>input</th><th>lags</th><th>instances</th><th></th>` +
    `</tr></thead><tbody>${rows}</tbody></table>`
  );
}

export function lagTabsHtml(lags: number[], selected: number | null): string {
  return lags
    .map((lag) => {
      const cls = lag === selected ? ` class="active"` : "";
      return `<button type="button"${cls} data-lag="${lag}">lag ${lag}</button>`;
    })
    .join("");
}

const SORTABLE: Array<{ column: SortColumn; header: string }> = [
  { column: "pattern", header: "pattern" },
  { column: "size", header: "size" },
  { column: "subgroup_mean", header: "subgroup mean" },
  { column: "quality", header: "quality" },
];

export function subgroupTableHtml(
  rows: SubgroupRow[],
  pinned: string[],
  detail: string | null,
): string {
  if (rows.length === 0) {
    return `<p class="empty-state">No subgroups cleared the size floor for this lag.</p>`;
  }
  const head = SORTABLE.map(
    (c) => `<th data-sort="${c.column}">${escapeHtml(c.header)}</th>`,
  ).join("");
  const body = rows
    .map((row) => {
      const checked = pinned.includes(row.pattern) ? " checked" : "";
      const cls = row.pattern === detail ? ` class="selected"` : "";
      return (
        `<tr${cls} data-pattern="${escapeHtml(row.pattern)}">` +
        `<td><input type="checkbox" data-pin="${escapeHtml(row.pattern)}"${checked}></td>` +
        `<td class="pattern">${escapeHtml(row.pattern)}</td>` +
        `<td>${row.size}</td>` +
        `<td>${row.subgroup_mean.toPrecision(5)}</td>` +
        `<td>${row.quality.toPrecision(5)}</td></tr>`
      );
    })
    .join("");
  return (
    `<table class="subgroups"><thead><tr><th></th>${head}</tr></thead>` +
    `<tbody>${body}</tbody></table>`
  );
}

// Plain-language reading of one subgroup, shown in the detail pane next
// to the rendered pattern and its coverage count.
export function describeSubgroup(row: SubgroupRow, instances: number): string {
  const clauses = row.selectors.map(([attr, label]) => `${attr} is ${label}`);
  const where = clauses.length > 0 ? clauses.join(" and ") : "any slice";
  const direction = row.subgroup_mean >= row.population_mean ? "above" : "below";
  return (
    `Slices where ${where}: ${row.size} of ${instances} instances, ` +
    `mean target ${row.subgroup_mean.toPrecision(4)} ` +
    `(${direction} the population mean ${row.population_mean.toPrecision(4)}).`
  );
}

export function detailHtml(
  row: SubgroupRow | null,
  instances: number,
): string {
  if (row === null) {
    return `<p class="empty-state">Select a subgroup row for details.</p>`;
  }
  return (
    `<h3 class="pattern">${escapeHtml(row.pattern)}</h3>` +
    `<p>${escapeHtml(describeSubgroup(row, instances))}</p>` +
    `<p class="coverage">covers ${row.size} instances, quality ${row.quality.toPrecision(5)}</p>`
  );
}

export function attributePickerHtml(attributes: string[], chosen: string[]): string {
  if (attributes.length === 0) {
    return "";
  }
  return attributes
    .map((attr) => {
      const checked = chosen.includes(attr) ? " checked" : "";
      return (
        `<label class="attr"><input type="checkbox" data-attr="${escapeHtml(attr)}"${checked}>` +
        `${escapeHtml(attr)}</label>`
      );
    })
    .join("");
}

export function fieldErrorsHtml(errors: Record<string, string>): string {
  return Object.keys(errors)
    .sort()
    .map((field) => `<p class="field-error" data-field="${escapeHtml(field)}">${escapeHtml(errors[field])}</p>`)
    .join("");
}
